#pragma once

// Three-point finite-difference Hamiltonians, hbar = m = 1:
//   H_ii = 1/h^2 + V_i,  H_i,i+1 = -1/(2 h^2)
// Dirichlet form drops psi(0) and psi((N+1)h); the Bloch form closes the ring
// with the corner pair H_1N = -e^{-i kappa L}/(2h^2), H_N1 = conj(H_1N).

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kpband/potentials.hpp"

namespace kpband {

using cplx = std::complex<double>;

/// e^{2 pi i turns}, exact at quarter turns so that kappa L in {0, pi} gives real matrices.
cplx unit_phase(double turns);

/// Bloch wave vector together with the boundary phase it induces on a box.
class BlochSpec {
 public:
  /// kappa = 2 pi kappa_frac / c; kappa_frac must lie in [0, 1].
  static BlochSpec from_fraction(double kappa_frac, const GridSpec& grid);
  /// Any real kappa; kappa_frac() is reported unreduced.
  static BlochSpec from_kappa(double kappa, const GridSpec& grid);

  double kappa() const noexcept { return kappa_; }
  double kappa_frac() const noexcept { return kappa_frac_; }
  /// e^{i kappa L} with L the full box length.
  cplx phase() const noexcept { return phase_; }

 private:
  BlochSpec(double kappa, double kappa_frac, cplx phase) : kappa_(kappa), kappa_frac_(kappa_frac), phase_(phase) {}

  double kappa_;
  double kappa_frac_;
  cplx phase_;
};

/// Read-only view of a "Laplacian + potential" matrix with an optional corner:
///   diag_i = 2 t + V_i,  off = -t,  entry(0, N-1) = corner.
/// A zero corner gives the Dirichlet matrix.
struct TridiagonalView {
  std::span<const double> potential;
  double hopping;  ///< t = 1 / (2 h^2)
  cplx corner;
  double step;

  int size() const noexcept { return static_cast<int>(potential.size()); }
  double diag(int i) const noexcept { return 2.0 * hopping + potential[static_cast<std::size_t>(i)]; }
  double off() const noexcept { return -hopping; }
  cplx entry(int i, int j) const;
  double diag_norm() const;
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Eigen::MatrixXcd dense() const;
};

class PeriodicHamiltonian {
 public:
  PeriodicHamiltonian(std::vector<double> potential, GridSpec grid, BlochSpec bloch);

  int size() const noexcept { return static_cast<int>(potential_.size()); }
  const GridSpec& grid() const noexcept { return grid_; }
  const BlochSpec& bloch() const noexcept { return bloch_; }
  std::span<const double> potential() const noexcept { return potential_; }

  double diag(int i) const noexcept { return view().diag(i); }
  double off() const noexcept { return -hopping_; }
  /// Entry (1, N) in 1-based notation; entry (N, 1) is its conjugate.
  cplx corner() const noexcept { return corner_; }
  cplx entry(int i, int j) const { return view().entry(i, j); }

  TridiagonalView view() const noexcept { return {potential_, hopping_, corner_, grid_.step()}; }
  /// Dense copy, for tests on small grids only.
  Eigen::MatrixXcd dense() const;

 private:
  std::vector<double> potential_;
  double hopping_;
  cplx corner_;
  GridSpec grid_;
  BlochSpec bloch_;
};

class DirichletHamiltonian {
 public:
  DirichletHamiltonian(std::vector<double> potential, double step);

  int size() const noexcept { return static_cast<int>(potential_.size()); }
  double step() const noexcept { return step_; }
  std::span<const double> potential() const noexcept { return potential_; }
  double diag(int i) const noexcept { return view().diag(i); }
  double off() const noexcept { return -hopping_; }

  TridiagonalView view() const noexcept { return {potential_, hopping_, cplx{0.0, 0.0}, step_}; }
  Eigen::MatrixXcd dense() const;

 private:
  std::vector<double> potential_;
  double hopping_;
  double step_;
};

PeriodicHamiltonian assemble_bloch(const SampledPotential& potential, const BlochSpec& bloch);
DirichletHamiltonian assemble_dirichlet(const SampledPotential& potential);
/// Dirichlet matrix straight from point values; allows N < 3.
DirichletHamiltonian assemble_dirichlet(std::span<const double> potential, double step);

}  // namespace kpband
