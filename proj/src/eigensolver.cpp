#include "kpband/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "kpband/errors.hpp"

namespace kpband {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Pivots of H - sigma I are carried as p_i = t (1 + u_i) with
//   u_0 = 1 + 2h^2 (V_0 - sigma),  u_i = u_{i-1} / (1 + u_{i-1}) + 2h^2 (V_i - sigma),
// which avoids forming 2t - sigma - t^2/p and keeps small eigenvalues relatively accurate.
constexpr double kPivMin = kEps * kEps;

double guard(double w) { return std::abs(w) < kPivMin ? -kPivMin : w; }

double spectral_scale(const TridiagonalView& h) {
  double vmax = 0.0;
  for (double v : h.potential) vmax = std::max(vmax, std::abs(v));
  return 4.0 * h.hopping + vmax;
}

void check_count(int n, int k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) +
                                "x" + std::to_string(n) + " matrix");
  }
}

// One step of the pivot recurrence u_i = u_{i-1} / w_{i-1} + 2h^2 (V_i - sigma), w_i = 1 + u_i.
struct Pivots {
  double u = 0.0;
  double w = 0.0;
  bool started = false;

  void push(double scaled_potential) {
    u = (started ? u / w : 1.0) + scaled_potential;
    started = true;
    w = guard(1.0 + u);
    if (w != 1.0 + u) u = w - 1.0;
  }
  /// 1 + u_{next} for a further point, i.e. d - 1 / w without the cancellation.
  double next(double scaled_potential) const { return 1.0 + (started ? u / w : 1.0) + scaled_potential; }
};

struct RingCount {
  int count = 0;
  double conditioning = 0.0;  ///< largest |entry| of A^{-1} that enters S
};

// Inertia of M = (H - sigma) / t for a ring with corner, read from point r on.
// The first m = n - 2 points form a real tridiagonal block A (off-diagonal -1); the last two rows p, q are eliminated through the 2x2 Schur complement
//   S_pp = d_p - (A^{-1})_{m-1,m-1},  S_qq = d_q - |c|^2 (A^{-1})_{00},
//   S_pq = -1 + c (A^{-1})_{m-1,0} = -1 + c / det A,
// with c the scaled corner. The diagonal entries are the next forward and
// backward pivots, so every quantity keeps the componentwise stability of a
// plain Sturm sequence. Splitting off two rows instead of one also keeps S
// regular at a doubly degenerate level, where every (n-1)-point block shares
// the eigenvalue by interlacing. S still loses digits in proportion to its
// conditioning when A itself is nearly singular at sigma.
RingCount ring_count(std::span<const double> v, double s2, cplx c, double sigma, int r) {
  const int n = static_cast<int>(v.size());
  const int m = n - 2;
  auto pot = [&](int i) { return s2 * (v[static_cast<std::size_t>((i + r) % n)] - sigma); };

  int count = 0;
  Pivots fwd;
  double mant = 1.0;  // det A = mant * 2^expo
  long expo = 0;
  for (int i = 0; i < m; ++i) {
    fwd.push(pot(i));
    if (fwd.w < 0.0) ++count;
    int e = 0;
    mant = std::frexp(mant * fwd.w, &e);
    expo += e;
  }
  Pivots bwd;
  for (int i = m - 1; i >= 0; --i) bwd.push(pot(i));

  const double spp = fwd.next(pot(m));
  const double sqq = bwd.next(pot(n - 1));
  // |c| = 1, so S_qq uses the backward pivot as is
  cplx spq{-1.0, 0.0};
  const double inv_det = m == 0 ? 1.0 : std::ldexp(1.0 / mant, static_cast<int>(std::clamp(-expo, -2000L, 1000L)));
  spq += c * inv_det;

  const double tr = spp + sqq;
  const double det = spp * sqq - std::norm(spq);
  const double disc = std::sqrt(0.25 * (spp - sqq) * (spp - sqq) + std::norm(spq));
  // larger-magnitude eigenvalue directly, the other through the determinant
  const double big = 0.5 * tr + std::copysign(disc, tr);
  const double small = big != 0.0 ? det / big : 0.0;
  if (big < 0.0) ++count;
  if (small < 0.0) ++count;
  const double cond = m == 0 ? 1.0 : std::max({std::abs(1.0 / fwd.w), std::abs(1.0 / bwd.w), inv_det});
  return {count, cond};
}

using SparseMatrix = Eigen::SparseMatrix<cplx>;

SparseMatrix to_sparse(const TridiagonalView& h, double shift) {
  const int n = h.size();
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(3 * n + 2));
  for (int i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, h.diag(i) - shift);
    if (i + 1 < n) {
      triplets.emplace_back(i, i + 1, h.off());
      triplets.emplace_back(i + 1, i, h.off());
    }
  }
  if (n >= 2 && h.corner != cplx{0.0, 0.0}) {
    triplets.emplace_back(0, n - 1, h.corner);
    triplets.emplace_back(n - 1, 0, std::conj(h.corner));
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXcd start_vector(int n, int index) {
  std::mt19937_64 rng(0x5eedULL + 7919ULL * static_cast<unsigned long long>(index));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(dist(rng), dist(rng));
  return x.normalized();
}

void orthogonalize(Eigen::VectorXcd& y, const std::vector<Eigen::VectorXcd>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) y -= q * q.dot(y);
  }
}

Spectrum eigenpairs(const TridiagonalView& h, int k, const SolverOptions& options, std::optional<BlochSpec> bloch) {
  const int n = h.size();
  const std::vector<double> values = lowest_eigenvalues(h, k, options);

  const SparseMatrix base = to_sparse(h, 0.0);
  SparseMatrix identity(n, n);
  identity.setIdentity();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(base);

  const double scale = spectral_scale(h);
  // unit-2-norm residual target equivalent to the h-normalized contract
  const double target = options.residual_tol * h.diag_norm() * std::sqrt(h.step);

  std::vector<Eigen::VectorXcd> vectors;
  vectors.reserve(static_cast<std::size_t>(k));
  int begin = 0;
  while (begin < k) {
    int end = begin + 1;
    while (end < k && values[static_cast<std::size_t>(end)] - values[static_cast<std::size_t>(end - 1)] <
                          options.degeneracy_tol * std::max(1.0, std::abs(values[static_cast<std::size_t>(end - 1)]))) {
      ++end;
    }
    double shift = 0.0;
    for (int j = begin; j < end; ++j) shift += values[static_cast<std::size_t>(j)];
    shift /= (end - begin);

    double nudge = 8.0 * kEps * scale;
    for (int attempt = 0;; ++attempt) {
      lu.factorize(base - shift * identity);
      if (lu.info() == Eigen::Success) break;
      if (attempt == 8) throw NumericalError("could not factorize H - E I near E = " + std::to_string(shift));
      shift += nudge;
      nudge *= 10.0;
    }

    for (int j = begin; j < end; ++j) {
      const double energy = values[static_cast<std::size_t>(j)];
      Eigen::VectorXcd x = start_vector(n, j);
      orthogonalize(x, vectors);
      x.normalize();
      double residual = std::numeric_limits<double>::infinity();
      for (int it = 0; it < options.max_inverse_iterations; ++it) {
        Eigen::VectorXcd y = lu.solve(x);
        orthogonalize(y, vectors);
        const double norm = y.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
          throw NumericalError("inverse iteration broke down for E = " + std::to_string(energy));
        }
        x = y / norm;
        residual = (base * x - energy * x).norm();
        if (residual <= 1e-3 * target) break;
      }
      if (!(residual <= target)) {
        throw NumericalError("inverse iteration did not converge for E = " + std::to_string(energy) +
                             " (residual " + std::to_string(residual) + ")");
      }
      vectors.push_back(std::move(x));
    }
    begin = end;
  }

  Spectrum spectrum;
  spectrum.k = k;
  spectrum.step = h.step;
  spectrum.bloch = bloch;
  spectrum.pairs.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto& v = vectors[static_cast<std::size_t>(j)];
    EigenPair pair{values[static_cast<std::size_t>(j)], std::vector<cplx>(v.data(), v.data() + v.size())};
    spectrum.pairs.push_back(normalize_and_fix_phase(std::move(pair), h.step));
  }
  return spectrum;
}

}  // namespace

std::vector<double> Spectrum::energies() const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.energy);
  return out;
}

int eigenvalue_count_below(const TridiagonalView& h, double sigma) {
  const int n = h.size();
  if (n == 0) return 0;
  if (n == 1) return h.diag(0) - sigma < 0.0 ? 1 : 0;

  const double s2 = 1.0 / h.hopping;  // 2 h^2
  const auto v = h.potential;

  if (h.corner == cplx{0.0, 0.0}) {
    // u is kept separately from w = 1 + u so that small u keeps its relative precision
    int count = 0;
    double u = 1.0 + s2 * (v[0] - sigma);
    double w = guard(1.0 + u);
    if (w != 1.0 + u) u = w - 1.0;
    if (w < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
      u = u / w + s2 * (v[static_cast<std::size_t>(i)] - sigma);
      const double wi = guard(1.0 + u);
      if (wi != 1.0 + u) u = wi - 1.0;
      w = wi;
      if (w < 0.0) ++count;
    }
    return count;
  }

  // Rotating the ring and keeping the corner is a gauge change: the phase
  // around the loop is the same. A badly conditioned cut is retried elsewhere.
  const cplx c = h.corner * s2;
  RingCount best = ring_count(v, s2, c, sigma, 0);
  const int tries = std::min(n - 1, 4);
  for (int k = 1; k <= tries && best.conditioning > 16.0; ++k) {
    const RingCount next = ring_count(v, s2, c, sigma, n >= 5 ? k * n / 5 : k);
    if (next.conditioning < best.conditioning) best = next;
  }
  return best.count;
}

std::vector<double> lowest_eigenvalues(const TridiagonalView& h, int k, const SolverOptions& options) {
  const int n = h.size();
  check_count(n, k);

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (double x : h.potential) {
    vmin = std::min(vmin, x);
    vmax = std::max(vmax, x);
  }
  // the kinetic part is positive semidefinite with norm <= 4t
  const double scale = spectral_scale(h);
  const double lower = vmin - 4.0 * kEps * scale;
  const double upper = vmax + 4.0 * h.hopping + 4.0 * kEps * scale;
  const double abs_floor = kEps * kEps * scale;

  std::vector<double> lo(static_cast<std::size_t>(k), lower);
  std::vector<double> hi(static_cast<std::size_t>(k), upper);
  std::vector<double> out(static_cast<std::size_t>(k));

  for (int m = 0; m < k; ++m) {
    auto& l = lo[static_cast<std::size_t>(m)];
    auto& u = hi[static_cast<std::size_t>(m)];
    int iterations = 0;
    while (u - l > std::max(options.rel_tol * std::max(std::abs(l), std::abs(u)), abs_floor)) {
      if (++iterations > options.max_iterations) {
        throw NumericalError("bisection for eigenvalue " + std::to_string(m + 1) + " exceeded " +
                             std::to_string(options.max_iterations) + " iterations");
      }
      const double mid = l + 0.5 * (u - l);
      if (mid <= l || mid >= u) break;
      const int below = eigenvalue_count_below(h, mid);
      for (int j = m; j < k; ++j) {
        if (below > j) {
          hi[static_cast<std::size_t>(j)] = std::min(hi[static_cast<std::size_t>(j)], mid);
        } else {
          lo[static_cast<std::size_t>(j)] = std::max(lo[static_cast<std::size_t>(j)], mid);
        }
      }
    }
    out[static_cast<std::size_t>(m)] = l + 0.5 * (u - l);
  }
  // rounding can leave neighbouring brackets of a degenerate pair out of order
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> lowest_eigenvalues(const PeriodicHamiltonian& h, int k, const SolverOptions& options) {
  return lowest_eigenvalues(h.view(), k, options);
}

std::vector<double> lowest_eigenvalues(const DirichletHamiltonian& h, int k, const SolverOptions& options) {
  return lowest_eigenvalues(h.view(), k, options);
}

Spectrum lowest_eigenpairs(const PeriodicHamiltonian& h, int k, const SolverOptions& options) {
  return eigenpairs(h.view(), k, options, h.bloch());
}

Spectrum lowest_eigenpairs(const DirichletHamiltonian& h, int k, const SolverOptions& options) {
  return eigenpairs(h.view(), k, options, std::nullopt);
}

EigenPair normalize_and_fix_phase(EigenPair pair, double step) {
  auto& psi = pair.wavefunction;
  double norm2 = 0.0;
  double max_mod = 0.0;
  for (const auto& z : psi) {
    norm2 += std::norm(z);
    max_mod = std::max(max_mod, std::abs(z));
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");

  std::size_t anchor = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) >= max_mod * (1.0 - 1e-10)) {
      anchor = i;
      break;
    }
  }
  const cplx rotation = std::conj(psi[anchor]) / std::abs(psi[anchor]);
  const double scale = 1.0 / std::sqrt(step * norm2);
  for (auto& z : psi) z *= rotation * scale;
  psi[anchor] = cplx(psi[anchor].real(), 0.0);
  return pair;
}

EigenPair normalize_and_fix_phase(EigenPair pair, const GridSpec& grid) {
  return normalize_and_fix_phase(std::move(pair), grid.step());
}

cplx grid_inner(std::span<const cplx> a, std::span<const cplx> b, double step) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return step * acc;
}

double residual_norm(const TridiagonalView& h, const EigenPair& pair) {
  std::vector<cplx> y(pair.wavefunction.size());
  h.apply(pair.wavefunction, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += std::norm(y[i] - pair.energy * pair.wavefunction[i]);
  return std::sqrt(acc);
}

}  // namespace kpband
