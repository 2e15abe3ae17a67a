#pragma once

// Flat key=value run configuration. Lines are `key = value`; '#' starts a
// comment. Every key has a default, so an empty document is a valid config.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kpband/bands.hpp"
#include "kpband/potentials.hpp"

namespace kpband {

enum class PotentialKind { kp, comb };
enum class EdgeMethod { fdm, analytic };

struct RunConfig {
  PotentialKind kind = PotentialKind::kp;
  double v0 = 0.5;      ///< potential.v0, hartree
  double a = 10.0;      ///< potential.a, bohr
  double b = 2.0;       ///< potential.b, bohr
  double alpha = 1.0;   ///< potential.alpha, hartree bohr
  double c = 12.0;      ///< potential.c, bohr (comb only; KP uses a + b)
  Sampling sampling = Sampling::point;

  int grid_n = 10000;   ///< points per period
  int periods = 1;
  int samples = 101;    ///< sweep.samples
  int bands = 7;
  bool normalize = false;
  EdgeMethod edge_method = EdgeMethod::fdm;

  int band = 1;
  double kappa_frac = 0.0;
  std::vector<int> sizes{1250, 2500, 5000, 10000};
  std::vector<int> states{1, 2, 3};
  int ring_periods = 20;  ///< spectrum.n
  int threads = 0;

  PotentialParams potential() const;
  double period() const;
  BandOptions band_options() const;
  /// Single-period grid with grid_n points.
  GridSpec cell_grid() const;

  /// Every key with its resolved value, sorted by key.
  std::map<std::string, std::string> resolved() const;
};

using Override = std::pair<std::string, std::string>;

/// Splits "key=value". Throws ConfigError when '=' or the key is missing.
Override parse_override(std::string_view assignment);

/// Reads the document, applies overrides on top and validates. Throws
/// ConfigError naming the key (and the line for document errors).
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

}  // namespace kpband
