#include "kpband/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "kpband/errors.hpp"

namespace kpband {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

double to_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

int to_int(std::string_view text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<int> to_int_list(std::string_view text) {
  std::vector<int> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_int(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

bool to_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"potential.kind",
       [](RunConfig& c, std::string_view v) {
         if (v == "kp") {
           c.kind = PotentialKind::kp;
         } else if (v == "comb") {
           c.kind = PotentialKind::comb;
         } else {
           throw std::invalid_argument("expected kp or comb, got '" + std::string(v) + "'");
         }
       }},
      {"potential.v0", [](RunConfig& c, std::string_view v) { c.v0 = to_double(v); }},
      {"potential.a", [](RunConfig& c, std::string_view v) { c.a = to_double(v); }},
      {"potential.b", [](RunConfig& c, std::string_view v) { c.b = to_double(v); }},
      {"potential.alpha",
       [](RunConfig& c, std::string_view v) { c.alpha = to_double(v); }},
      {"potential.c", [](RunConfig& c, std::string_view v) { c.c = to_double(v); }},
      {"potential.sampling",
       [](RunConfig& c, std::string_view v) {
         if (v == "point") {
           c.sampling = Sampling::point;
         } else if (v == "cell_average") {
           c.sampling = Sampling::cell_average;
         } else {
           throw std::invalid_argument("expected point or cell_average, got '" + std::string(v) + "'");
         }
       }},
      {"grid.n", [](RunConfig& c, std::string_view v) { c.grid_n = to_int(v); }},
      {"periods", [](RunConfig& c, std::string_view v) { c.periods = to_int(v); }},
      {"sweep.samples",
       [](RunConfig& c, std::string_view v) { c.samples = to_int(v); }},
      {"sweep.normalize",
       [](RunConfig& c, std::string_view v) { c.normalize = to_bool(v); }},
      {"bands", [](RunConfig& c, std::string_view v) { c.bands = to_int(v); }},
      {"edges.method",
       [](RunConfig& c, std::string_view v) {
         if (v == "fdm") {
           c.edge_method = EdgeMethod::fdm;
         } else if (v == "analytic") {
           c.edge_method = EdgeMethod::analytic;
         } else {
           throw std::invalid_argument("expected fdm or analytic, got '" + std::string(v) + "'");
         }
       }},
      {"band", [](RunConfig& c, std::string_view v) { c.band = to_int(v); }},
      {"kappa_frac",
       [](RunConfig& c, std::string_view v) { c.kappa_frac = to_double(v); }},
      {"grid.sizes",
       [](RunConfig& c, std::string_view v) { c.sizes = to_int_list(v); }},
      {"states", [](RunConfig& c, std::string_view v) { c.states = to_int_list(v); }},
      {"spectrum.n",
       [](RunConfig& c, std::string_view v) { c.ring_periods = to_int(v); }},
      {"threads", [](RunConfig& c, std::string_view v) { c.threads = to_int(v); }},
  };
  return table;
}

void check(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void validate_config(const RunConfig& c, const std::set<std::string>& explicit_keys) {
  if (c.kind == PotentialKind::kp) {
    for (const char* key : {"potential.alpha", "potential.c"}) {
      check(!explicit_keys.contains(key), key, "only applies to potential.kind = comb");
    }
    check(c.v0 >= 0.0, "potential.v0", "must be >= 0");
    check(c.a > 0.0, "potential.a", "must be > 0");
    check(c.b >= 0.0, "potential.b", "must be >= 0");
  } else {
    for (const char* key : {"potential.v0", "potential.a", "potential.b", "potential.sampling"}) {
      check(!explicit_keys.contains(key), key, "only applies to potential.kind = kp");
    }
    check(c.alpha >= 0.0, "potential.alpha", "must be >= 0");
    check(c.c > 0.0, "potential.c", "must be > 0");
  }
  check(c.grid_n >= 3, "grid.n", "must be >= 3, got " + std::to_string(c.grid_n));
  check(c.periods >= 1, "periods", "must be >= 1");
  check(c.samples >= 1, "sweep.samples", "must be >= 1");
  check(c.bands >= 1, "bands", "must be >= 1");
  check(c.band >= 1, "band", "must be >= 1");
  check(c.kappa_frac >= 0.0 && c.kappa_frac <= 1.0, "kappa_frac", "must lie in [0, 1]");
  check(c.sizes.size() >= 3, "grid.sizes", "needs at least 3 sizes");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    check(c.sizes[i] >= 3, "grid.sizes", "every size must be >= 3");
    check(i == 0 || c.sizes[i] > c.sizes[i - 1], "grid.sizes", "must be strictly increasing");
  }
  check(!c.states.empty(), "states", "needs at least one state");
  for (int s : c.states) check(s >= 1, "states", "state indices are 1-based");
  check(c.ring_periods >= 1, "spectrum.n", "must be >= 1");
  check(c.threads >= 0, "threads", "must be >= 0");
}

}  // namespace

PotentialParams RunConfig::potential() const {
  if (kind == PotentialKind::kp) return KronigPenneyParams{v0, a, b};
  return DiracCombParams{alpha, c};
}

double RunConfig::period() const { return period_of(potential()); }

BandOptions RunConfig::band_options() const {
  BandOptions options;
  options.sampling = sampling;
  options.threads = threads;
  return options;
}

GridSpec RunConfig::cell_grid() const { return GridSpec::for_period(period(), grid_n); }

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> out{
      {"potential.kind", kind == PotentialKind::kp ? "kp" : "comb"},
      {"grid.n", std::to_string(grid_n)},
      {"periods", std::to_string(periods)},
      {"sweep.samples", std::to_string(samples)},
      {"sweep.normalize", normalize ? "true" : "false"},
      {"bands", std::to_string(bands)},
      {"edges.method", edge_method == EdgeMethod::fdm ? "fdm" : "analytic"},
      {"band", std::to_string(band)},
      {"kappa_frac", shortest(kappa_frac)},
      {"grid.sizes", join(sizes)},
      {"states", join(states)},
      {"spectrum.n", std::to_string(ring_periods)},
      {"threads", std::to_string(threads)},
  };
  if (kind == PotentialKind::kp) {
    out["potential.v0"] = shortest(v0);
    out["potential.a"] = shortest(a);
    out["potential.b"] = shortest(b);
    out["potential.sampling"] = sampling == Sampling::point ? "point" : "cell_average";
  } else {
    out["potential.alpha"] = shortest(alpha);
    out["potential.c"] = shortest(c);
  }
  return out;
}

Override parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("", "expected key=value, got '" + std::string(assignment) + "'");
  }
  const auto key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("", "missing key in '" + std::string(assignment) + "'");
  return {std::string(key), std::string(trim(assignment.substr(eq + 1)))};
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", "expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("", "missing key before '='", line_no);
    if (!setters().contains(key)) throw ConfigError(key, "unknown key", line_no);
    if (entries.contains(key)) {
      throw ConfigError(key, "duplicate key, first set on line " + std::to_string(entries[key].line), line_no);
    }
    entries[key] = {std::string(trim(line.substr(eq + 1))), line_no};
  }
  for (const auto& [key, value] : overrides) {
    if (!setters().contains(key)) throw ConfigError(key, "unknown key");
    entries[key] = {value, 0};
  }

  RunConfig config;
  std::set<std::string> explicit_keys;
  for (const auto& [key, entry] : entries) {
    if (entry.value.empty()) throw ConfigError(key, "missing value", entry.line);
    try {
      setters().at(key)(config, entry.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what(), entry.line);
    }
    explicit_keys.insert(key);
  }
  validate_config(config, explicit_keys);
  return config;
}

}  // namespace kpband
