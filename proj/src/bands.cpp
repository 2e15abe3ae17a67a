#include "kpband/bands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "kpband/errors.hpp"

namespace kpband {

namespace {

void require_single_period(const GridSpec& grid) {
  if (grid.n_periods() != 1) {
    throw std::invalid_argument("band-structure routines need a single-period grid, got " +
                                std::to_string(grid.n_periods()) + " periods");
  }
}

std::string kappa_context(double kappa_frac) {
  return "kappa_frac = " + std::to_string(kappa_frac) + ": ";
}

// Runs body(i) for i in [0, count) on a small worker pool. Every index writes
// its own slot, so results do not depend on scheduling.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  int failed_index = std::numeric_limits<int>::max();
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          // report the lowest failing index so the error is reproducible
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> uniform_fractions(int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one kappa sample");
  std::vector<double> out(static_cast<std::size_t>(samples), 0.0);
  for (int j = 1; j < samples; ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(j) / (samples - 1);
  return out;
}

void bloch_adapt(Spectrum& spectrum, const GridSpec& grid, const SolverOptions& solver) {
  const int per_cell = grid.points_per_period();
  const int n = grid.n_points();
  if (grid.n_periods() == 1 || !spectrum.bloch) return;
  const cplx phase = spectrum.bloch->phase();

  auto translate = [&](const std::vector<cplx>& psi) {
    // (T psi)_i = psi(x_i + c), continued past the box with the Bloch phase
    std::vector<cplx> out(psi.size());
    for (int i = 0; i < n; ++i) {
      const int j = i + per_cell;
      out[static_cast<std::size_t>(i)] =
          j < n ? psi[static_cast<std::size_t>(j)] : phase * psi[static_cast<std::size_t>(j - n)];
    }
    return out;
  };

  auto& pairs = spectrum.pairs;
  const int k = static_cast<int>(pairs.size());
  int begin = 0;
  while (begin < k) {
    int end = begin + 1;
    while (end < k && pairs[static_cast<std::size_t>(end)].energy - pairs[static_cast<std::size_t>(end - 1)].energy <
                          solver.degeneracy_tol * std::max(1.0, std::abs(pairs[static_cast<std::size_t>(end - 1)].energy))) {
      ++end;
    }
    const int m = end - begin;
    if (m > 1) {
      Eigen::MatrixXcd q(n, m);
      for (int c = 0; c < m; ++c) {
        const auto& psi = pairs[static_cast<std::size_t>(begin + c)].wavefunction;
        for (int i = 0; i < n; ++i) q(i, c) = psi[static_cast<std::size_t>(i)];
      }
      Eigen::MatrixXcd tq(n, m);
      for (int c = 0; c < m; ++c) {
        const auto t = translate(pairs[static_cast<std::size_t>(begin + c)].wavefunction);
        for (int i = 0; i < n; ++i) tq(i, c) = t[static_cast<std::size_t>(i)];
      }
      const Eigen::MatrixXcd reduced = q.adjoint() * tq;
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(reduced);
      if (eig.info() != Eigen::Success) throw NumericalError("translation eigenproblem failed");

      std::vector<int> order(static_cast<std::size_t>(m));
      for (int c = 0; c < m; ++c) order[static_cast<std::size_t>(c)] = c;
      std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::arg(eig.eigenvalues()(x)) < std::arg(eig.eigenvalues()(y));
      });
      Eigen::MatrixXcd rotated = q * eig.eigenvectors();
      std::vector<Eigen::VectorXcd> basis;
      for (int c = 0; c < m; ++c) {
        Eigen::VectorXcd v = rotated.col(order[static_cast<std::size_t>(c)]);
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& b : basis) v -= b * b.dot(v);
        }
        v.normalize();
        basis.push_back(v);
        auto& pair = pairs[static_cast<std::size_t>(begin + c)];
        pair.wavefunction.assign(v.data(), v.data() + v.size());
        pair = normalize_and_fix_phase(std::move(pair), grid.step());
      }
    }
    begin = end;
  }
}

}  // namespace

double ComparisonReport::max_deviation() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max({m, r.dev_min, r.dev_max});
  return m;
}

std::vector<double> bloch_levels(const SampledPotential& potential, double kappa_frac, int n_bands,
                                 const SolverOptions& solver) {
  const auto bloch = BlochSpec::from_fraction(kappa_frac, potential.grid);
  try {
    return lowest_eigenvalues(assemble_bloch(potential, bloch), n_bands, solver);
  } catch (const NumericalError& e) {
    throw NumericalError(kappa_context(kappa_frac) + e.what());
  }
}

BandStructure sweep(const PotentialParams& params, const GridSpec& grid, int kappa_samples, int n_bands,
                    const BandOptions& options, bool normalize) {
  require_single_period(grid);
  const auto potential = sample(params, grid, options.sampling);
  BandStructure result{.kappa_fracs = uniform_fractions(kappa_samples),
                       .energies = {},
                       .normalized = std::nullopt,
                       .reference_energy = 0.0,
                       .params = params,
                       .grid = grid};
  result.energies.resize(result.kappa_fracs.size());
  parallel_for(kappa_samples, options.threads, [&](int j) {
    const auto idx = static_cast<std::size_t>(j);
    result.energies[idx] = bloch_levels(potential, result.kappa_fracs[idx], n_bands, options.solver);
  });
  result.reference_energy = result.energies.front().front();
  if (normalize) {
    // a reference at the rounding level of the spectrum (free particle at kappa = 0) is zero in disguise
    const double h = grid.step();
    double vmax = 0.0;
    for (double v : potential.values) vmax = std::max(vmax, std::abs(v));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (2.0 / (h * h) + vmax);
    if (!(result.reference_energy > floor)) {
      throw std::invalid_argument("cannot normalize by a ground state energy that is not positive (E_1 = " +
                                  std::to_string(result.reference_energy) + " hartree)");
    }
    auto scaled = result.energies;
    for (auto& row : scaled) {
      for (auto& e : row) e /= result.reference_energy;
    }
    result.normalized = std::move(scaled);
  }
  return result;
}

std::vector<RingState> discrete_spectrum(const PotentialParams& params, const GridSpec& grid, int n_periods,
                                         int n_bands, const BandOptions& options) {
  require_single_period(grid);
  if (n_periods < 1) throw std::invalid_argument("ring needs at least one period");
  const auto potential = sample(params, grid, options.sampling);
  std::vector<RingState> out(static_cast<std::size_t>(n_periods));
  parallel_for(n_periods, options.threads, [&](int l) {
    const double frac = static_cast<double>(l) / n_periods;
    auto& state = out[static_cast<std::size_t>(l)];
    state.l = l;
    state.kappa = 2.0 * std::numbers::pi * frac / grid.period();
    state.energies = bloch_levels(potential, frac, n_bands, options.solver);
  });
  return out;
}

BandEdges fdm_band_edges(const SampledPotential& potential, int n_bands, const SolverOptions& solver) {
  require_single_period(potential.grid);
  const auto centre = bloch_levels(potential, 0.0, n_bands, solver);
  const auto boundary = bloch_levels(potential, 0.5, n_bands, solver);
  BandEdges edges;
  for (int m = 0; m < n_bands; ++m) {
    const double e0 = centre[static_cast<std::size_t>(m)];
    const double e1 = boundary[static_cast<std::size_t>(m)];
    edges.bands.push_back({m + 1, std::min(e0, e1), std::max(e0, e1)});
  }
  return edges;
}

BandEdges fdm_band_edges(const PotentialParams& params, const GridSpec& grid, int n_bands,
                         const BandOptions& options) {
  return fdm_band_edges(sample(params, grid, options.sampling), n_bands, options.solver);
}

ComparisonReport compare_with_analytic(const PotentialParams& params, const GridSpec& grid, int n_bands,
                                       const BandOptions& options) {
  const auto exact = band_edges(DispersionFn(params), n_bands);
  const auto fdm = fdm_band_edges(params, grid, n_bands, options);
  ComparisonReport report;
  for (int m = 0; m < n_bands; ++m) {
    const auto& a = exact[static_cast<std::size_t>(m)];
    const auto& f = fdm[static_cast<std::size_t>(m)];
    report.rows.push_back({m + 1, a.e_min, a.e_max, f.e_min, f.e_max, std::abs(f.e_min - a.e_min),
                           std::abs(f.e_max - a.e_max)});
  }
  return report;
}

ConvergenceReport convergence_study(const PotentialParams& params, double kappa_frac, int band,
                                    const std::vector<int>& sizes, const BandOptions& options) {
  if (sizes.size() < 3) throw std::invalid_argument("convergence study needs at least 3 grid sizes");
  if (!std::is_sorted(sizes.begin(), sizes.end()) ||
      std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
    throw std::invalid_argument("grid sizes must be strictly increasing");
  }
  if (band < 1) throw std::invalid_argument("band index is 1-based");

  const DispersionFn f(params);
  const auto edges = band_edges(f, band);
  ConvergenceReport report;
  report.reference = solve_E(f, kappa_frac, band, edges);

  const double c = period_of(params);
  report.levels.resize(sizes.size());
  parallel_for(static_cast<int>(sizes.size()), options.threads, [&](int i) {
    const int n = sizes[static_cast<std::size_t>(i)];
    const auto grid = GridSpec::for_period(c, n);
    const auto levels = bloch_levels(sample(params, grid, options.sampling), kappa_frac, band, options.solver);
    const double e = levels[static_cast<std::size_t>(band - 1)];
    report.levels[static_cast<std::size_t>(i)] = {n, grid.step(), e, std::abs(e - report.reference)};
  });

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
    const auto& coarse = report.levels[i];
    const auto& fine = report.levels[i + 1];
    const double p = std::log(coarse.error / fine.error) / std::log(coarse.step / fine.step);
    report.orders.push_back(p);
    total += p;
  }
  report.order = total / static_cast<double>(report.orders.size());
  return report;
}

Spectrum box_states(const PotentialParams& params, const GridSpec& grid, double kappa_frac, int n_states,
                    const BandOptions& options) {
  const auto potential = sample(params, grid, options.sampling);
  const auto hamiltonian = assemble_bloch(potential, BlochSpec::from_fraction(kappa_frac, grid));
  // 1-D Bloch levels are at most doubly degenerate (kappa and -kappa), so two
  // extra states complete any cluster cut by n_states
  const int k = std::min(n_states + 2, grid.n_points());
  Spectrum spectrum;
  try {
    spectrum = lowest_eigenpairs(hamiltonian, k, options.solver);
  } catch (const NumericalError& e) {
    throw NumericalError(kappa_context(kappa_frac) + e.what());
  }
  bloch_adapt(spectrum, grid, options.solver);
  spectrum.pairs.resize(static_cast<std::size_t>(n_states));
  spectrum.k = n_states;
  return spectrum;
}

double periodicity_statistic(std::span<const double> density, int lag) {
  const auto n = density.size();
  if (n == 0) throw std::invalid_argument("empty density");
  double mean = 0.0;
  for (double d : density) mean += d;
  mean /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = density[i] - mean;
    const double b = density[(i + static_cast<std::size_t>(lag)) % n] - mean;
    num += a * b;
    den += a * a;
  }
  return den > 0.0 ? num / den : 1.0;
}

}  // namespace kpband
