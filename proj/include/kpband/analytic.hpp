#pragma once

// Exact band structure from the transcendental dispersion relation
// F(E) = cos(kappa c) of the Kronig-Penney model and the Dirac comb.

#include <optional>
#include <vector>

#include "kpband/potentials.hpp"

namespace kpband {

struct WaveNumbers {
  double k1 = 0.0;            ///< sqrt(2E), 1/bohr
  std::optional<double> k2;   ///< sqrt(2(V0 - E)) when E <= V0
};

WaveNumbers wave_numbers(double energy, double v0);

/// KP dispersion: bound-state form for E < V0, the oscillatory form above the
/// barrier, and a series through E = V0. Throws std::domain_error for E <= 0.
double kp_F(double energy, const KronigPenneyParams& params);
/// lim E->0+ of kp_F: v0 a b sinh(z)/z + cosh(z), z = sqrt(2 v0) b.
double kp_F_at_zero(const KronigPenneyParams& params);

/// alpha sin(sqrt(2E) c) / sqrt(2E) + cos(sqrt(2E) c). Throws std::domain_error for E <= 0.
double comb_F(double energy, const DiracCombParams& params);
double comb_F_at_zero(const DiracCombParams& params);

class DispersionFn {
 public:
  explicit DispersionFn(PotentialParams params);

  const PotentialParams& params() const noexcept { return params_; }
  double period() const { return period_of(params_); }

  /// F(E) for E > 0; E == 0 returns the right-hand limit.
  double operator()(double energy) const;
  /// dF/dE by complex-step differentiation.
  double derivative(double energy) const;
  /// Scan step min(pi^2/(2c^2), energy scale) / 200, the energy scale being
  /// v0 for KP and alpha/c for the comb.
  double default_scan_step() const;
  /// Upper bound on the top of band n_bands + 1.
  double default_ceiling(int n_bands) const;

 private:
  PotentialParams params_;
};

struct BandInterval {
  int band = 0;   ///< 1-based
  double e_min = 0.0;
  double e_max = 0.0;
};

struct BandEdges {
  std::vector<BandInterval> bands;

  std::size_t size() const noexcept { return bands.size(); }
  const BandInterval& operator[](std::size_t i) const { return bands[i]; }
};

struct ScanOptions {
  double step = 0.0;       ///< 0 selects DispersionFn::default_scan_step
  double ceiling = 0.0;    ///< 0 selects DispersionFn::default_ceiling
  double root_tol = 1e-12; ///< absolute bisection tolerance (hartree)
  /// An extremum of F with |F| <= 1 + touch_tol is a band contact (zero-width gap).
  double touch_tol = 1e-12;
};

/// Bands are the intervals with |F(E)| <= 1, located by scanning F and
/// bisecting each crossing of |F| = 1. Throws NumericalError when the ceiling
/// is reached first or F is not monotone inside a band.
BandEdges band_edges(const DispersionFn& f, int n_bands, const ScanOptions& options = {});

/// Root of F(E) = cos(2 pi kappa_frac) inside band `band` (1-based). The
/// result satisfies |F(E)| <= 1. Throws NumericalError if F is not monotone
/// on the band.
double solve_E(const DispersionFn& f, double kappa_frac, int band, const BandEdges& edges,
               double root_tol = 1e-12);

}  // namespace kpband
