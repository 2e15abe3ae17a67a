// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Lines starting with "info" are diagnostics
// and never affect the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kpband/bands.hpp"
#include "oracles.hpp"

using namespace kpband;
using std::numbers::pi;

namespace {

struct Edge {
  double lo;
  double hi;
};

// reference KP edges: V0 = 0.5, a = 10, b = 2, c = 12
const std::vector<Edge> kKpAnalytic{{0.030796, 0.037141}, {0.121302, 0.148295}, {0.266337, 0.332651},
                                    {0.459674, 0.588875}, {0.698950, 0.915166}, {0.989655, 1.309390},
                                    {1.342598, 1.767130}};
const std::vector<Edge> kKpFdm{{0.030804, 0.037141}, {0.121334, 0.148290}, {0.266391, 0.332637},
                               {0.459723, 0.588843}, {0.698941, 0.915100}, {0.989543, 1.309269},
                               {1.342370, 1.766798}};
// reference comb edges: alpha = 1, c = 12
const std::vector<Edge> kCombAnalytic{{0.025296, 0.034269}, {0.102488, 0.137078}, {0.234797, 0.308425},
                                      {0.425939, 0.548311}, {0.679069, 0.856736}, {0.996470, 1.233701}};
const std::vector<Edge> kCombFdm{{0.025296, 0.034263}, {0.102488, 0.137050}, {0.234789, 0.308363},
                                 {0.425908, 0.548202}, {0.679005, 0.856565}, {0.996355, 1.233454}};

const KronigPenneyParams kKp{0.5, 10.0, 2.0};
const DiracCombParams kComb{1.0, 12.0};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void verdict(const std::string& id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::printf("%s %-3s %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str());
  std::fflush(stdout);
}

void info(const std::string& what) {
  std::printf("info     %s\n", what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double max_edge_deviation(const BandEdges& got, const std::vector<Edge>& want) {
  double worst = 0.0;
  for (std::size_t m = 0; m < want.size(); ++m) {
    worst = std::max({worst, std::abs(got[m].e_min - want[m].lo), std::abs(got[m].e_max - want[m].hi)});
  }
  return worst;
}

GridSpec cell(int n) { return GridSpec::for_period(12.0, n); }

void table1_analytic() {
  Clock clock;
  const auto edges = band_edges(DispersionFn(kKp), 7);
  const double t = clock.seconds();
  const double dev = max_edge_deviation(edges, kKpAnalytic);
  verdict("1", dev <= 1e-5 && t < 1.0,
          fmt("KP reference analytic edges, 7 bands: max |dev| = %.3e (tol 1e-5), %.3f s (limit 1 s)", dev, t));
}

void table1_fdm() {
  Clock clock;
  const auto edges = fdm_band_edges(kKp, cell(10000), 7);
  const double t = clock.seconds();
  const double dev = max_edge_deviation(edges, kKpFdm);
  verdict("2", dev <= 2e-5 && t < 300.0,
          fmt("KP reference FDM edges at N = 10000: max |dev| = %.3e (tol 2e-5), %.3f s (limit 300 s)", dev, t));

  // A ring of N + 1 points at h = 12/N (period c + h) lands much closer to the
  // reference FDM column than the N-point ring does. Shown for diagnosis only.
  const int n = 10001;
  const double h = 12.0 / 10000;
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (i * h < kKp.b) v[static_cast<std::size_t>(i)] = kKp.v0;
  }
  const SampledPotential ring{v, GridSpec(n, n * h)};
  const auto ring_edges = fdm_band_edges(ring, 7);
  info(fmt("N + 1 point ring at h = 12/10000 against the reference FDM column: max |dev| = %.3e",
           max_edge_deviation(ring_edges, kKpFdm)));
  info(fmt("N-point grid against analytic edges: max |dev| = %.3e", max_edge_deviation(edges, kKpAnalytic)));
}

void table4() {
  const auto analytic = band_edges(DispersionFn(kComb), 6);
  const double dev_a = max_edge_deviation(analytic, kCombAnalytic);
  Clock clock;
  const auto fdm = fdm_band_edges(kComb, cell(10000), 6);
  const double t = clock.seconds();
  const double dev_f = max_edge_deviation(fdm, kCombFdm);
  verdict("3a", dev_a <= 1e-5, fmt("comb reference analytic edges, 6 bands: max |dev| = %.3e (tol 1e-5)", dev_a));
  verdict("3b", dev_f <= 2e-5,
          fmt("comb reference FDM edges at N = 10000: max |dev| = %.3e (tol 2e-5), %.3f s", dev_f, t));

  const int n = 10001;
  const double h = 12.0 / 10000;
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v.front() = 0.5 / h;
  v.back() = 0.5 / h;
  const SampledPotential ring{v, GridSpec(n, n * h)};
  info(fmt("N + 1 point ring with the delta split over both end points: max |dev| = %.3e",
           max_edge_deviation(fdm_band_edges(ring, 6), kCombFdm)));
}

void convergence() {
  const std::vector<int> sizes{1250, 2500, 5000, 10000};
  Clock clock;
  BandOptions averaged;
  averaged.sampling = Sampling::cell_average;
  const auto report = convergence_study(kKp, 0.0, 1, sizes, averaged);
  const double t = clock.seconds();
  verdict("4", report.order >= 1.8 && report.order <= 2.2 && t < 120.0,
          fmt("KP band 1 e_min convergence (cell-averaged sampling): p = %.4f (range [1.8, 2.2]), %.3f s", report.order,
              t));
  const auto point = convergence_study(kKp, 0.0, 1, sizes);
  std::string orders;
  for (double p : point.orders) orders += fmt(" %.3f", p);
  info(fmt("point sampling: p = %.4f, successive orders", point.order) + orders);
}

void free_particle() {
  double worst = 0.0;
  for (int n : {64, 1000}) {
    const double h = 12.0 / n;
    for (double frac : {0.0, 0.1, 0.25, 0.5, 0.8}) {
      const SampledPotential pot{std::vector<double>(static_cast<std::size_t>(n), 0.0), GridSpec(n, 12.0)};
      const int k = std::min(n, 64);
      const auto ev = lowest_eigenvalues(assemble_bloch(pot, BlochSpec::from_fraction(frac, pot.grid)), k);
      const auto exact = oracle::free_bloch(n, h, 2.0 * pi * frac);
      for (int m = 0; m < k; ++m) {
        const double e = exact[static_cast<std::size_t>(m)];
        // the exact zero at kappa = 0 is measured against the diagonal scale
        const double scale = e > 0.0 ? e : 1.0 / (h * h);
        worst = std::max(worst, std::abs(ev[static_cast<std::size_t>(m)] - e) / scale);
      }
    }
    const auto dir = lowest_eigenvalues(assemble_dirichlet(std::vector<double>(static_cast<std::size_t>(n), 0.0), h),
                                        std::min(n, 64));
    worst = std::max(worst, oracle::max_relative_gap(dir, oracle::free_dirichlet(n, h), 0.0));
  }
  verdict("5", worst <= 1e-10,
          fmt("free-particle Bloch and Dirichlet eigenvalues, N = 64 and 1000: max rel err = %.3e (tol 1e-10)", worst));
}

void small_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  for (int n = 3; n <= 8; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const SampledPotential pot{oracle::random_potential(rng, n, 3.0), GridSpec(n, n * (0.2 + 2.0 * u(rng)))};
      const auto h = assemble_bloch(pot, BlochSpec::from_fraction(u(rng), pot.grid));
      const auto ev = lowest_eigenvalues(h, n);
      const auto dense = oracle::dense_eigenvalues(h.dense());
      for (int m = 0; m < n; ++m) worst = std::max(worst, std::abs(ev[static_cast<std::size_t>(m)] - dense[static_cast<std::size_t>(m)]));
      ++cases;
    }
    // Dirichlet, including the 1x1 and 2x2 cases
    for (int trial = 0; trial < 50; ++trial) {
      for (int d : {1, 2, n}) {
        const auto v = oracle::random_potential(rng, d, 3.0);
        const auto h = assemble_dirichlet(v, 0.3 + u(rng));
        const auto ev = lowest_eigenvalues(h, d);
        const auto dense = oracle::dense_eigenvalues(h.dense());
        for (int m = 0; m < d; ++m) worst = std::max(worst, std::abs(ev[static_cast<std::size_t>(m)] - dense[static_cast<std::size_t>(m)]));
        ++cases;
      }
    }
  }
  verdict("6", worst <= 1e-12,
          fmt("structured vs dense eigenvalues, N <= 8, %.0f random cases: max |dev| = %.3e (tol 1e-12)", cases, worst));
}

void properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Hermiticity
  double herm = 0.0;
  for (int n = 3; n <= 40; ++n) {
    const SampledPotential pot{oracle::random_potential(rng, n, 1.0), GridSpec(n, 0.5 * n)};
    const auto h = assemble_bloch(pot, BlochSpec::from_fraction(u(rng), pot.grid));
    const auto d = h.dense();
    herm = std::max(herm, (d - d.adjoint()).cwiseAbs().maxCoeff());
  }

  // norms, orthogonality, residuals
  double norm_err = 0.0;
  double ortho = 0.0;
  double resid = 0.0;
  for (double frac : {0.0, 0.5, 0.27}) {
    for (const PotentialParams& p : {PotentialParams{kKp}, PotentialParams{kComb}}) {
      const auto grid = cell(10000);
      const auto h = assemble_bloch(sample(p, grid), BlochSpec::from_fraction(frac, grid));
      const auto s = lowest_eigenpairs(h, 7);
      const double bound = h.view().diag_norm();
      for (std::size_t i = 0; i < s.pairs.size(); ++i) {
        const auto& psi = s.pairs[i].wavefunction;
        norm_err = std::max(norm_err, std::abs(grid_inner(psi, psi, s.step).real() - 1.0));
        resid = std::max(resid, residual_norm(h.view(), s.pairs[i]) / bound);
        for (std::size_t j = 0; j < i; ++j) ortho = std::max(ortho, std::abs(grid_inner(s.pairs[j].wavefunction, psi, s.step)));
      }
    }
  }
  const auto six = GridSpec::for_period(12.0, 10000, 6);
  const auto box = box_states(kKp, six, 1.0, 3);
  for (std::size_t i = 0; i < box.pairs.size(); ++i) {
    const auto& psi = box.pairs[i].wavefunction;
    norm_err = std::max(norm_err, std::abs(grid_inner(psi, psi, box.step).real() - 1.0));
    for (std::size_t j = 0; j < i; ++j) ortho = std::max(ortho, std::abs(grid_inner(box.pairs[j].wavefunction, psi, box.step)));
  }

  // kappa symmetries
  double sym = 0.0;
  const auto pot = sample(kKp, cell(10000));
  for (double frac : {0.1, 0.23, 0.4}) {
    const auto base = bloch_levels(pot, frac, 7);
    const auto mirror = bloch_levels(pot, 1.0 - frac, 7);
    const auto neg = lowest_eigenvalues(assemble_bloch(pot, BlochSpec::from_kappa(-2.0 * pi * frac / 12.0, pot.grid)), 7);
    for (std::size_t m = 0; m < 7; ++m) sym = std::max({sym, std::abs(base[m] - mirror[m]), std::abs(base[m] - neg[m])});
  }

  // translation invariance of the edges
  double shift = 0.0;
  for (const PotentialParams& p : {PotentialParams{kKp}, PotentialParams{kComb}}) {
    const auto sampled = sample(p, cell(10000));
    const auto base = fdm_band_edges(sampled, 7);
    for (int s : {1, 833, 5000}) {
      const auto moved = fdm_band_edges(cyclic_shift(sampled, s), 7);
      for (std::size_t m = 0; m < 7; ++m) {
        shift = std::max({shift, std::abs(moved[m].e_min - base[m].e_min), std::abs(moved[m].e_max - base[m].e_max)});
      }
    }
  }

  // KP -> comb on allowed energies of bands 1-6
  const double b = 1e-4;
  const KronigPenneyParams thin{kComb.alpha / b, kComb.c - b, b};
  const DispersionFn comb(kComb);
  const auto comb_edges = band_edges(comb, 6);
  double limit = 0.0;
  for (const auto& band : comb_edges.bands) {
    for (int j = 0; j <= 500; ++j) {
      const double e = band.e_min + (band.e_max - band.e_min) * j / 500.0;
      limit = std::max(limit, std::abs(kp_F(e, thin) - comb(e)));
    }
  }

  // |F| <= 1 on solve_E output
  double worst_f = 0.0;
  for (const PotentialParams& p : {PotentialParams{kKp}, PotentialParams{kComb}}) {
    const DispersionFn f(p);
    const auto edges = band_edges(f, 7);
    for (int band = 1; band <= 7; ++band) {
      for (int j = 0; j <= 100; ++j) worst_f = std::max(worst_f, std::abs(f(solve_E(f, j / 100.0, band, edges))));
    }
  }

  verdict("7a", herm == 0.0, fmt("Hermiticity: max |H - H^dagger| = %.3e (exact)", herm));
  verdict("7b", norm_err <= 1e-8 && ortho <= 1e-8,
          fmt("wavefunction norm error %.3e, orthogonality %.3e (tol 1e-8)", norm_err, ortho));
  verdict("7c", resid <= 1e-8, fmt("residual / ||diag||_inf = %.3e (tol 1e-8)", resid));
  verdict("7d", sym <= 1e-8, fmt("kappa -> -kappa and kappa -> 1 - kappa spectra: max |dev| = %.3e (tol 1e-8)", sym));
  verdict("7e", shift <= 1e-8, fmt("edges under cyclic shifts of the potential: max |dev| = %.3e (tol 1e-8)", shift));
  verdict("7f", limit <= 1e-4, fmt("KP with b = 1e-4 vs comb, allowed energies of bands 1-6: max |dF| = %.3e (tol 1e-4)", limit));
  verdict("7g", worst_f <= 1.0, fmt("max |F| over solve_E outputs = %.17g (must be <= 1)", worst_f));
}

void figures() {
  // band extrema at kappa_frac = 0.5 with alternating direction
  const auto result = sweep(kKp, cell(10000), 41, 7);
  bool extrema = true;
  for (int m = 0; m < 7; ++m) {
    std::vector<double> curve;
    for (std::size_t j = 0; j <= 20; ++j) curve.push_back(result.energies[j][static_cast<std::size_t>(m)]);
    const auto top = std::max_element(curve.begin(), curve.end()) - curve.begin();
    const auto bottom = std::min_element(curve.begin(), curve.end()) - curve.begin();
    extrema = extrema && (m % 2 == 0 ? (top == 20 && bottom == 0) : (top == 0 && bottom == 20));
  }
  verdict("8a", extrema, "band extrema at kappa_frac = 0.5, maxima for odd bands and minima for even bands");

  // widths shrink and centres approach the infinite well levels as V0 grows
  bool widths = true;
  bool centres = true;
  std::vector<BandEdges> by_height;
  for (double v0 : {0.5, 1.0, 1.5, 2.0}) by_height.push_back(fdm_band_edges(KronigPenneyParams{v0, 10.0, 2.0}, cell(10000), 7));
  for (std::size_t k = 1; k < by_height.size(); ++k) {
    for (std::size_t m = 0; m < 7; ++m) {
      const auto& now = by_height[k][m];
      const auto& before = by_height[k - 1][m];
      widths = widths && (now.e_max - now.e_min) <= (before.e_max - before.e_min);
      const double well = 0.5 * std::pow((m + 1) * pi / 10.0, 2);
      centres = centres && std::abs(0.5 * (now.e_min + now.e_max) - well) < std::abs(0.5 * (before.e_min + before.e_max) - well);
    }
  }
  verdict("8b", widths && centres, "V0 = 0.5, 1, 1.5, 2: band widths shrink and centres approach n^2 pi^2 / (2 a^2)");

  // minima fall as the well fills more of the cell
  bool minima = true;
  std::vector<BandEdges> by_width;
  for (double a : {2.0, 4.0, 6.0, 8.0}) by_width.push_back(fdm_band_edges(KronigPenneyParams{0.5, a, 12.0 - a}, cell(10000), 7));
  for (std::size_t k = 1; k < by_width.size(); ++k) {
    for (std::size_t m = 0; m < 7; ++m) minima = minima && by_width[k][m].e_min < by_width[k - 1][m].e_min;
  }
  verdict("8c", minima, "a/c = 2/12, 4/12, 6/12, 8/12: every band minimum decreases");

  // six-period box at kappa_frac = 1
  const auto six = GridSpec::for_period(12.0, 10000, 6);
  const auto states = box_states(kKp, six, 1.0, 3);
  double lowest = 1.0;
  for (const auto& pair : states.pairs) {
    std::vector<double> density;
    for (const auto& z : pair.wavefunction) density.push_back(std::norm(z));
    lowest = std::min(lowest, periodicity_statistic(density, six.points_per_period()));
  }
  verdict("8d", lowest > 0.99, fmt("6-period states 1-3: min periodicity statistic at lag N/6 = %.6f (> 0.99)", lowest));
}

void band6_spread() {
  const auto analytic = band_edges(DispersionFn(kKp), 7);
  const double ra = (analytic[5].e_max - analytic[5].e_min) / analytic[0].e_min;
  const auto fdm = fdm_band_edges(kKp, cell(10000), 7);
  const double rf = (fdm[5].e_max - fdm[5].e_min) / fdm[0].e_min;
  verdict("9", std::abs(ra - 10.38) <= 0.05 && std::abs(rf - 10.38) <= 0.05,
          fmt("band 6 spread / E_1: analytic %.4f, FDM %.4f (target 10.38 +- 0.05)", ra, rf));
}

}  // namespace

int main() {
  Clock total;
  table1_analytic();
  table1_fdm();
  table4();
  convergence();
  free_particle();
  small_oracle();
  properties();
  figures();
  band6_spread();
  std::printf("%s: %d failing criteria, %.1f s\n", failures == 0 ? "ALL PASS" : "FAILED", failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
