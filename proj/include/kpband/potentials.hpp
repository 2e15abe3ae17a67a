#pragma once

// Kronig-Penney and Dirac comb potentials sampled on a uniform periodic grid.
// Hartree atomic units throughout: energies in hartree, lengths in bohr.

#include <variant>
#include <vector>

namespace kpband {

/// Rectangular barrier lattice. Each period cell [0, c) holds the barrier of
/// height v0 on [0, b) followed by the well on [b, c), with c = a + b.
struct KronigPenneyParams {
  double v0 = 0.0;  ///< barrier height (hartree)
  double a = 0.0;   ///< well width (bohr)
  double b = 0.0;   ///< barrier width (bohr)

  double period() const noexcept { return a + b; }
  /// Throws std::invalid_argument unless a > 0, b >= 0 and v0 is finite and >= 0.
  void validate() const;
};

/// Periodic array of delta barriers alpha * sum_j delta(x - j c).
struct DiracCombParams {
  double alpha = 0.0;  ///< delta strength (hartree bohr)
  double c = 0.0;      ///< lattice distance (bohr)

  double period() const noexcept { return c; }
  void validate() const;
};

using PotentialParams = std::variant<KronigPenneyParams, DiracCombParams>;

double period_of(const PotentialParams& params);
void validate(const PotentialParams& params);

/// Uniform grid x_i = i h, i = 1..N, over a box of n_periods whole periods.
/// The point x = 0 is identified with x = L through the Bloch phase.
class GridSpec {
 public:
  GridSpec(int n_points, double box_length, int n_periods = 1);

  /// Box of `n_periods` cells of length `period`, each sampled by
  /// `points_per_period` points.
  static GridSpec for_period(double period, int points_per_period, int n_periods = 1);

  int n_points() const noexcept { return n_points_; }
  int n_periods() const noexcept { return n_periods_; }
  int points_per_period() const noexcept { return n_points_ / n_periods_; }
  double box_length() const noexcept { return box_length_; }
  double period() const noexcept { return box_length_ / n_periods_; }
  double step() const noexcept { return box_length_ / n_points_; }
  /// Coordinate of the 1-based grid point i.
  double coordinate(int i) const noexcept { return i * step(); }

 private:
  int n_points_;
  double box_length_;
  int n_periods_;
};

/// How a discontinuous potential is evaluated at grid points.
enum class Sampling {
  point,         ///< V(x_i), barrier membership by the half-open rule x in [0, b)
  cell_average,  ///< mean of V over [x_i - h/2, x_i + h/2]
};

struct SampledPotential {
  std::vector<double> values;  ///< V(x_i) for i = 1..N (hartree)
  GridSpec grid;
};

SampledPotential sample_kp(const KronigPenneyParams& params, const GridSpec& grid,
                           Sampling sampling = Sampling::point);

/// One grid point per period (the cell origin, x = 0 mod c) carries alpha / h,
/// so that the discrete strength V h equals alpha.
SampledPotential sample_comb(const DiracCombParams& params, const GridSpec& grid);

SampledPotential sample(const PotentialParams& params, const GridSpec& grid,
                        Sampling sampling = Sampling::point);

/// values'[i] = values[(i + steps) mod N]; the sampling origin moves by `steps` grid points.
SampledPotential cyclic_shift(const SampledPotential& potential, int steps);

}  // namespace kpband
