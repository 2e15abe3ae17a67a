#pragma once

// kappa sweeps, finite-ring spectra, band edges and FDM-vs-analytic comparisons.

#include <optional>
#include <vector>

#include "kpband/analytic.hpp"
#include "kpband/eigensolver.hpp"
#include "kpband/potentials.hpp"

namespace kpband {

struct BandOptions {
  Sampling sampling = Sampling::point;
  int threads = 0;  ///< 0 uses the hardware concurrency
  SolverOptions solver;
};

struct BandStructure {
  std::vector<double> kappa_fracs;               ///< M samples in [0, 1]
  std::vector<std::vector<double>> energies;     ///< [sample][band], hartree
  std::optional<std::vector<std::vector<double>>> normalized;  ///< energies / reference_energy
  double reference_energy = 0.0;  ///< band 1 at kappa_frac = 0
  PotentialParams params;
  GridSpec grid;
};

struct RingState {
  int l = 0;              ///< allowed momentum index, kappa = 2 pi l / (n c)
  double kappa = 0.0;     ///< 1/bohr
  std::vector<double> energies;  ///< lowest n_bands levels, band order
};

struct BandComparison {
  int band = 0;
  double analytic_min = 0.0;
  double analytic_max = 0.0;
  double fdm_min = 0.0;
  double fdm_max = 0.0;
  double dev_min = 0.0;  ///< |fdm_min - analytic_min|
  double dev_max = 0.0;
};

struct ComparisonReport {
  std::vector<BandComparison> rows;
  double max_deviation() const;
};

struct ConvergenceLevel {
  int n = 0;
  double step = 0.0;
  double energy = 0.0;
  double error = 0.0;  ///< |E_fdm - E_analytic|
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  double reference = 0.0;  ///< analytic energy
  std::vector<double> orders;  ///< log(err_i / err_i+1) / log(h_i / h_i+1)
  double order = 0.0;          ///< mean of `orders`
};

/// Lowest n_bands Bloch eigenvalues at one kappa_frac on a single-period grid.
std::vector<double> bloch_levels(const SampledPotential& potential, double kappa_frac, int n_bands,
                                 const SolverOptions& solver = {});

BandStructure sweep(const PotentialParams& params, const GridSpec& grid, int kappa_samples, int n_bands,
                    const BandOptions& options = {}, bool normalize = false);

/// Born-von Karman ring of n periods: one Bloch solve per l = 0..n-1 on the
/// single-period grid.
std::vector<RingState> discrete_spectrum(const PotentialParams& params, const GridSpec& grid, int n_periods,
                                         int n_bands, const BandOptions& options = {});

/// Edges from the two solves kappa c = 0 and kappa c = pi.
BandEdges fdm_band_edges(const SampledPotential& potential, int n_bands, const SolverOptions& solver = {});
BandEdges fdm_band_edges(const PotentialParams& params, const GridSpec& grid, int n_bands,
                         const BandOptions& options = {});

ComparisonReport compare_with_analytic(const PotentialParams& params, const GridSpec& grid, int n_bands,
                                       const BandOptions& options = {});

/// FDM energy of `band` at `kappa_frac` against the analytic root for each
/// points-per-period count in `sizes` (>= 3 levels, strictly increasing).
ConvergenceReport convergence_study(const PotentialParams& params, double kappa_frac, int band,
                                    const std::vector<int>& sizes, const BandOptions& options = {});

/// Eigenstates of the n-period box at kappa_frac. Degenerate levels are
/// rotated into eigenvectors of the one-period translation, so each state
/// is a Bloch wave with a cell-periodic density.
Spectrum box_states(const PotentialParams& params, const GridSpec& grid, double kappa_frac, int n_states,
                    const BandOptions& options = {});

/// Cyclic autocorrelation of a density at the given lag (1 for a lag-periodic pattern).
double periodicity_statistic(std::span<const double> density, int lag);

}  // namespace kpband
