#include "kpband/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kpband {

namespace {

void check_finite(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty potential");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("potential contains non-finite values");
  }
}

double hopping_for(double step) {
  if (!std::isfinite(step) || step <= 0.0) throw std::invalid_argument("grid step must be > 0");
  return 0.5 / (step * step);
}

}  // namespace

cplx unit_phase(double turns) {
  double r = turns - std::floor(turns);
  if (r == 0.0) return {1.0, 0.0};
  if (r == 0.25) return {0.0, 1.0};
  if (r == 0.5) return {-1.0, 0.0};
  if (r == 0.75) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * r;
  return {std::cos(angle), std::sin(angle)};
}

BlochSpec BlochSpec::from_fraction(double kappa_frac, const GridSpec& grid) {
  if (!(kappa_frac >= 0.0 && kappa_frac <= 1.0)) throw std::invalid_argument("kappa_frac must lie in [0, 1]");
  const double kappa = 2.0 * std::numbers::pi * kappa_frac / grid.period();
  return {kappa, kappa_frac, unit_phase(kappa_frac * grid.n_periods())};
}

BlochSpec BlochSpec::from_kappa(double kappa, const GridSpec& grid) {
  if (!std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite");
  const double frac = kappa * grid.period() / (2.0 * std::numbers::pi);
  return {kappa, frac, unit_phase(kappa * grid.box_length() / (2.0 * std::numbers::pi))};
}

cplx TridiagonalView::entry(int i, int j) const {
  const int n = size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("matrix index");
  cplx value{0.0, 0.0};
  if (i == j) return diag(i);
  if (std::abs(i - j) == 1) value += off();
  if (i == 0 && j == n - 1) value += corner;
  if (i == n - 1 && j == 0) value += std::conj(corner);
  return value;
}

double TridiagonalView::diag_norm() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, std::abs(diag(i)));
  return m;
}

void TridiagonalView::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const int n = size();
  const double t = off();
  for (int i = 0; i < n; ++i) {
    cplx acc = diag(i) * x[static_cast<std::size_t>(i)];
    if (i > 0) acc += t * x[static_cast<std::size_t>(i - 1)];
    if (i + 1 < n) acc += t * x[static_cast<std::size_t>(i + 1)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  if (n >= 2) {
    y[0] += corner * x[static_cast<std::size_t>(n - 1)];
    y[static_cast<std::size_t>(n - 1)] += std::conj(corner) * x[0];
  }
}

Eigen::MatrixXcd TridiagonalView::dense() const {
  const int n = size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = entry(i, j);
  }
  return m;
}

PeriodicHamiltonian::PeriodicHamiltonian(std::vector<double> potential, GridSpec grid, BlochSpec bloch)
    : potential_(std::move(potential)), hopping_(hopping_for(grid.step())), grid_(grid), bloch_(bloch) {
  check_finite(potential_);
  if (size() != grid_.n_points()) throw std::invalid_argument("potential length does not match the grid");
  if (size() < 3) throw std::invalid_argument("Bloch Hamiltonian needs N >= 3");
  corner_ = -hopping_ * std::conj(bloch_.phase());
}

Eigen::MatrixXcd PeriodicHamiltonian::dense() const { return view().dense(); }

DirichletHamiltonian::DirichletHamiltonian(std::vector<double> potential, double step)
    : potential_(std::move(potential)), hopping_(hopping_for(step)), step_(step) {
  check_finite(potential_);
}

Eigen::MatrixXcd DirichletHamiltonian::dense() const { return view().dense(); }

PeriodicHamiltonian assemble_bloch(const SampledPotential& potential, const BlochSpec& bloch) {
  return {potential.values, potential.grid, bloch};
}

DirichletHamiltonian assemble_dirichlet(const SampledPotential& potential) {
  return {potential.values, potential.grid.step()};
}

DirichletHamiltonian assemble_dirichlet(std::span<const double> potential, double step) {
  return {std::vector<double>(potential.begin(), potential.end()), step};
}

}  // namespace kpband
