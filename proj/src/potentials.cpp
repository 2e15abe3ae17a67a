#include "kpband/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kpband {

namespace {

void check_box(const GridSpec& grid, double period) {
  const double expected = grid.n_periods() * period;
  if (std::abs(grid.box_length() - expected) > 1e-12 * std::max(1.0, expected)) {
    throw std::invalid_argument("grid box length " + std::to_string(grid.box_length()) +
                                " is not " + std::to_string(grid.n_periods()) +
                                " whole periods of " + std::to_string(period));
  }
}

double overlap(double lo, double hi, double a, double b) {
  return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

}  // namespace

void KronigPenneyParams::validate() const {
  if (!std::isfinite(v0) || v0 < 0.0) throw std::invalid_argument("v0 must be finite and >= 0");
  if (!std::isfinite(a) || a <= 0.0) throw std::invalid_argument("well width a must be > 0");
  if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("barrier width b must be >= 0");
}

void DiracCombParams::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be finite and >= 0");
  if (!std::isfinite(c) || c <= 0.0) throw std::invalid_argument("lattice distance c must be > 0");
}

double period_of(const PotentialParams& params) {
  return std::visit([](const auto& p) { return p.period(); }, params);
}

void validate(const PotentialParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

GridSpec::GridSpec(int n_points, double box_length, int n_periods)
    : n_points_(n_points), box_length_(box_length), n_periods_(n_periods) {
  if (n_points < 3) throw std::invalid_argument("grid needs at least 3 points");
  if (n_periods < 1) throw std::invalid_argument("grid needs at least one period");
  if (!std::isfinite(box_length) || box_length <= 0.0) throw std::invalid_argument("box length must be > 0");
  if (n_points % n_periods != 0) {
    throw std::invalid_argument("N = " + std::to_string(n_points) + " is not divisible by " +
                                std::to_string(n_periods) + " periods");
  }
}

GridSpec GridSpec::for_period(double period, int points_per_period, int n_periods) {
  if (points_per_period < 1) throw std::invalid_argument("points per period must be >= 1");
  return GridSpec(points_per_period * n_periods, n_periods * period, n_periods);
}

SampledPotential sample_kp(const KronigPenneyParams& params, const GridSpec& grid, Sampling sampling) {
  params.validate();
  const double c = params.period();
  check_box(grid, c);

  const int n = grid.n_points();
  const int per_cell = grid.points_per_period();
  const double h = grid.step();
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    // local coordinate inside the cell [0, c); x_N = L folds onto 0
    const double x = (i % per_cell) * h;
    double v = 0.0;
    if (sampling == Sampling::point) {
      v = x < params.b ? params.v0 : 0.0;
    } else {
      const double lo = x - 0.5 * h;
      const double hi = x + 0.5 * h;
      double covered = 0.0;
      for (int m = -1; m <= 1; ++m) covered += overlap(lo, hi, m * c, m * c + params.b);
      v = params.v0 * std::min(covered, h) / h;
    }
    values[static_cast<std::size_t>(i - 1)] = v;
  }
  return {std::move(values), grid};
}

SampledPotential sample_comb(const DiracCombParams& params, const GridSpec& grid) {
  params.validate();
  check_box(grid, params.c);

  const int n = grid.n_points();
  const int per_cell = grid.points_per_period();
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  const double strength = params.alpha / grid.step();
  for (int i = per_cell; i <= n; i += per_cell) values[static_cast<std::size_t>(i - 1)] = strength;
  return {std::move(values), grid};
}

SampledPotential sample(const PotentialParams& params, const GridSpec& grid, Sampling sampling) {
  if (const auto* kp = std::get_if<KronigPenneyParams>(&params)) return sample_kp(*kp, grid, sampling);
  return sample_comb(std::get<DiracCombParams>(params), grid);
}

SampledPotential cyclic_shift(const SampledPotential& potential, int steps) {
  const auto n = static_cast<long>(potential.values.size());
  std::vector<double> shifted(potential.values.size());
  const long s = ((steps % n) + n) % n;
  for (long i = 0; i < n; ++i) shifted[static_cast<std::size_t>(i)] = potential.values[static_cast<std::size_t>((i + s) % n)];
  return {std::move(shifted), potential.grid};
}

}  // namespace kpband
