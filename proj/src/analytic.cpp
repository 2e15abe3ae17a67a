#include "kpband/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kpband/errors.hpp"

namespace kpband {

namespace {

using std::numbers::pi;

// Even entire functions of y = z^2:
//   shc(y) = sinh(z)/z,  chc(y) = cosh(z)
// so that shc(-x^2) = sin(x)/x and chc(-x^2) = cos(x). Below |y| < 1e-6 the
// truncated series replaces the 0/0 form.
constexpr double kSeriesThreshold = 1e-6;

double shc(double y) {
  if (std::abs(y) < kSeriesThreshold) return 1.0 + y / 6.0 + y * y / 120.0;
  if (y > 0.0) {
    const double z = std::sqrt(y);
    return std::sinh(z) / z;
  }
  const double z = std::sqrt(-y);
  return std::sin(z) / z;
}

double chc(double y) {
  if (std::abs(y) < kSeriesThreshold) return 1.0 + y / 2.0 + y * y / 24.0;
  if (y > 0.0) return std::cosh(std::sqrt(y));
  return std::cos(std::sqrt(-y));
}

std::complex<double> shc(std::complex<double> y) {
  if (std::abs(y) < kSeriesThreshold) return 1.0 + y / 6.0 + y * y / 120.0;
  const auto z = std::sqrt(y);
  return std::sinh(z) / z;
}

std::complex<double> chc(std::complex<double> y) {
  if (std::abs(y) < kSeriesThreshold) return 1.0 + y / 2.0 + y * y / 24.0;
  return std::cosh(std::sqrt(y));
}

// With k1 = sqrt(2E) and k2^2 = 2(V0 - E), the bound-state relation
//   (V0 - 2E) / (2 sqrt(E) sqrt(V0 - E)) sinh(k2 b) sin(k1 a) + cosh(k2 b) cos(k1 a)
// equals (V0 - 2E) a b [sin(k1 a)/(k1 a)] [sinh(k2 b)/(k2 b)] + cosh(k2 b) cos(k1 a),
// and continuing k2 -> i k2 above the barrier gives the sin/cos form.
template <class T>
T kp_eval(T energy, const KronigPenneyParams& p) {
  const T well = -2.0 * energy * p.a * p.a;           // -(k1 a)^2
  const T barrier = 2.0 * (p.v0 - energy) * p.b * p.b;  // (k2 b)^2
  return (p.v0 - 2.0 * energy) * (p.a * p.b) * shc(well) * shc(barrier) + chc(barrier) * chc(well);
}

template <class T>
T comb_eval(T energy, const DiracCombParams& p) {
  const T phase = -2.0 * energy * p.c * p.c;  // -(k c)^2
  return p.alpha * p.c * shc(phase) + chc(phase);
}

void require_positive(double energy) {
  if (!(energy > 0.0)) throw std::domain_error("dispersion needs E > 0, got " + std::to_string(energy));
}

}  // namespace

WaveNumbers wave_numbers(double energy, double v0) {
  WaveNumbers k;
  k.k1 = std::sqrt(2.0 * std::max(energy, 0.0));
  if (energy <= v0) k.k2 = std::sqrt(2.0 * (v0 - energy));
  return k;
}

double kp_F(double energy, const KronigPenneyParams& params) {
  require_positive(energy);
  return kp_eval(energy, params);
}

double kp_F_at_zero(const KronigPenneyParams& params) { return kp_eval(0.0, params); }

double comb_F(double energy, const DiracCombParams& params) {
  require_positive(energy);
  return comb_eval(energy, params);
}

double comb_F_at_zero(const DiracCombParams& params) { return comb_eval(0.0, params); }

DispersionFn::DispersionFn(PotentialParams params) : params_(std::move(params)) { validate(params_); }

double DispersionFn::operator()(double energy) const {
  if (energy < 0.0 || std::isnan(energy)) throw std::domain_error("dispersion needs E >= 0");
  if (const auto* kp = std::get_if<KronigPenneyParams>(&params_)) return kp_eval(energy, *kp);
  return comb_eval(energy, std::get<DiracCombParams>(params_));
}

double DispersionFn::derivative(double energy) const {
  const double eta = 1e-30 * std::max(1.0, energy);
  const std::complex<double> e(energy, eta);
  std::complex<double> value;
  if (const auto* kp = std::get_if<KronigPenneyParams>(&params_)) {
    value = kp_eval(e, *kp);
  } else {
    value = comb_eval(e, std::get<DiracCombParams>(params_));
  }
  return value.imag() / eta;
}

double DispersionFn::default_scan_step() const {
  const double c = period();
  const double free_scale = pi * pi / (2.0 * c * c);
  double scale = free_scale;
  if (const auto* kp = std::get_if<KronigPenneyParams>(&params_)) {
    if (kp->v0 > 0.0) scale = kp->v0;
  } else {
    const auto& comb = std::get<DiracCombParams>(params_);
    if (comb.alpha > 0.0) scale = comb.alpha / comb.c;
  }
  return std::min(free_scale, scale) / 200.0;
}

double DispersionFn::default_ceiling(int n_bands) const {
  // Dirichlet walls at the barriers only raise levels, so band n tops out
  // below the n-th level of an infinite well as wide as the well region.
  const double width = std::holds_alternative<KronigPenneyParams>(params_)
                           ? std::get<KronigPenneyParams>(params_).a
                           : std::get<DiracCombParams>(params_).c;
  const double k = (n_bands + 1) * pi / width;
  return 1.05 * 0.5 * k * k + 2.0 * default_scan_step();
}

BandEdges band_edges(const DispersionFn& f, int n_bands, const ScanOptions& options) {
  if (n_bands < 1) throw std::invalid_argument("n_bands must be >= 1");
  const double step = options.step > 0.0 ? options.step : f.default_scan_step();
  const double ceiling = options.ceiling > 0.0 ? options.ceiling : f.default_ceiling(n_bands);
  const double tol = options.root_tol;

  auto allowed = [](double value) { return std::abs(value) <= 1.0; };

  // crossing of |F| = 1; returns the allowed side
  auto edge = [&](double inside, double outside) {
    while (std::abs(outside - inside) > tol) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (allowed(f(mid)) ? inside : outside) = mid;
    }
    return inside;
  };

  // zero of F' inside [lo, hi], assuming one sign change
  auto extremum = [&](double lo, double hi) {
    double dlo = f.derivative(lo);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double dm = f.derivative(mid);
      if ((dm > 0.0) == (dlo > 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  BandEdges result;
  auto& out = result.bands;
  auto close_band = [&](double start, double end) {
    out.push_back({static_cast<int>(out.size()) + 1, start, end});
  };

  double band_start = 0.0;
  bool open = false;
  bool pending_gap = false;  // last band closed by a crossing; next opening decides contact vs gap
  double e_prev2 = 0.0;
  double e_prev = 0.0;
  double f_prev = f(0.0);
  int dir_prev = 0;
  if (allowed(f_prev)) open = true;

  for (long j = 1;; ++j) {
    if (static_cast<int>(out.size()) >= n_bands && !pending_gap) break;
    const double e = static_cast<double>(j) * step;
    if (e > ceiling) {
      if (static_cast<int>(out.size()) >= n_bands) break;
      throw NumericalError("scan ceiling " + std::to_string(ceiling) + " hartree reached after " +
                           std::to_string(out.size()) + " of " + std::to_string(n_bands) + " bands");
    }
    const double value = f(e);
    const bool was_in = allowed(f_prev);
    const bool now_in = allowed(value);

    if (was_in && now_in) {
      const int dir = value > f_prev ? 1 : (value < f_prev ? -1 : 0);
      if (dir != 0 && dir_prev != 0 && dir != dir_prev) {
        const double x = extremum(e_prev2, e);
        const double fx = f(x);
        if (std::abs(fx) < 1.0 - 1e-9) {
          throw NumericalError("F(E) is not monotone inside the band near E = " + std::to_string(x));
        }
        if (std::abs(fx) <= 1.0 + options.touch_tol) {
          close_band(band_start, x);
          band_start = x;
        } else {
          // a gap narrower than the scan step
          const double left = e_prev < x ? e_prev : e_prev2;
          const double right = e_prev < x ? e : e_prev;
          close_band(band_start, edge(left, x));
          band_start = edge(right, x);
        }
      }
      if (dir != 0) dir_prev = dir;
    } else if (!was_in && now_in) {
      double start = edge(e, e_prev);
      if (pending_gap) {
        const double end = out.back().e_max;
        if (f.derivative(end) * f.derivative(start) < 0.0) {
          const double x = extremum(end, start);
          if (std::abs(f(x)) <= 1.0 + options.touch_tol) {
            out.back().e_max = x;
            start = x;
          }
        }
        pending_gap = false;
      }
      band_start = start;
      open = true;
      dir_prev = 0;
    } else if (was_in && !now_in) {
      if (open) {
        close_band(band_start, edge(e_prev, e));
        pending_gap = true;
      }
      open = false;
      dir_prev = 0;
    }
    e_prev2 = e_prev;
    e_prev = e;
    f_prev = value;
  }
  out.resize(static_cast<std::size_t>(n_bands));
  return result;
}

double solve_E(const DispersionFn& f, double kappa_frac, int band, const BandEdges& edges, double root_tol) {
  if (!(kappa_frac >= 0.0 && kappa_frac <= 1.0)) throw std::invalid_argument("kappa_frac must lie in [0, 1]");
  if (band < 1 || band > static_cast<int>(edges.size())) {
    throw std::invalid_argument("band " + std::to_string(band) + " not present in the band edges");
  }
  const auto& interval = edges[static_cast<std::size_t>(band - 1)];

  const double r = std::min(kappa_frac, 1.0 - kappa_frac);
  double target = std::cos(2.0 * pi * r);
  if (r == 0.0) target = 1.0;
  if (r == 0.25) target = 0.0;
  if (r == 0.5) target = -1.0;

  double lo = interval.e_min;
  double hi = interval.e_max;
  const double f_lo = f(lo);
  const double f_hi = f(hi);

  constexpr int kProbes = 64;
  const double direction = f_hi > f_lo ? 1.0 : -1.0;
  double previous = f_lo;
  for (int i = 1; i <= kProbes; ++i) {
    const double x = i == kProbes ? hi : lo + (hi - lo) * i / kProbes;
    const double fx = f(x);
    if ((fx - previous) * direction <= 0.0) {
      throw NumericalError("F(E) is not monotone on band " + std::to_string(band) + " near E = " +
                           std::to_string(x));
    }
    previous = fx;
  }

  double v_lo = f_lo;
  double v_hi = f_hi;
  if ((v_lo > target) != (v_hi > target) && v_lo != target && v_hi != target) {
    while (hi - lo > root_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double vm = f(mid);
      if ((vm > target) == (v_lo > target)) {
        lo = mid;
        v_lo = vm;
      } else {
        hi = mid;
        v_hi = vm;
      }
    }
  }

  // prefer a bracket end that stays inside the allowed region
  const bool lo_ok = std::abs(v_lo) <= 1.0;
  const bool hi_ok = std::abs(v_hi) <= 1.0;
  const double d_lo = std::abs(v_lo - target);
  const double d_hi = std::abs(v_hi - target);
  if (lo_ok && (!hi_ok || d_lo <= d_hi)) return lo;
  if (hi_ok) return hi;
  return d_lo <= d_hi ? lo : hi;
}

}  // namespace kpband
