#pragma once

// Lowest eigenpairs of the Hermitian tridiagonal-plus-corner matrices built in
// hamiltonian.hpp. Eigenvalues come from bisection on an inertia count (Sturm
// sequence of the leading tridiagonal block plus the 2x2 Schur complement of
// the last two rows); eigenvectors from inverse iteration.

#include <optional>
#include <vector>

#include "kpband/hamiltonian.hpp"

namespace kpband {

struct SolverOptions {
  /// Bisection stops once the bracket is narrower than rel_tol * |E|.
  /// Defaults to machine resolution, well inside the 1e-12 contract.
  double rel_tol = 4.0 * 2.220446049250313e-16;
  int max_iterations = 10000;  ///< bisection steps per eigenvalue
  double degeneracy_tol = 1e-9;  ///< |E_{i+1} - E_i| < tol * max(1, |E_i|)
  int max_inverse_iterations = 30;
  /// Residual bound ||H psi - E psi|| <= residual_tol * ||diag||_inf for h-normalized psi.
  double residual_tol = 1e-8;
};

struct EigenPair {
  double energy = 0.0;          ///< hartree
  std::vector<cplx> wavefunction;  ///< amplitudes at x_1..x_N, h * sum |psi|^2 = 1
};

struct Spectrum {
  std::vector<EigenPair> pairs;  ///< ascending energies
  std::optional<BlochSpec> bloch;
  int k = 0;
  double step = 0.0;

  std::vector<double> energies() const;
};

/// Number of eigenvalues strictly below sigma (up to rounding at sigma itself).
int eigenvalue_count_below(const TridiagonalView& h, double sigma);

std::vector<double> lowest_eigenvalues(const TridiagonalView& h, int k, const SolverOptions& options = {});
std::vector<double> lowest_eigenvalues(const PeriodicHamiltonian& h, int k, const SolverOptions& options = {});
std::vector<double> lowest_eigenvalues(const DirichletHamiltonian& h, int k, const SolverOptions& options = {});

Spectrum lowest_eigenpairs(const PeriodicHamiltonian& h, int k, const SolverOptions& options = {});
Spectrum lowest_eigenpairs(const DirichletHamiltonian& h, int k, const SolverOptions& options = {});

/// Scales to h * sum |psi|^2 = 1 and rotates the global phase so the
/// largest-modulus component is real and positive (lowest index on ties,
/// moduli within 1e-10 relative count as tied).
EigenPair normalize_and_fix_phase(EigenPair pair, double step);
EigenPair normalize_and_fix_phase(EigenPair pair, const GridSpec& grid);

/// Discrete inner product h * sum conj(a_i) b_i.
cplx grid_inner(std::span<const cplx> a, std::span<const cplx> b, double step);

/// ||H psi - E psi||_2.
double residual_norm(const TridiagonalView& h, const EigenPair& pair);

}  // namespace kpband
