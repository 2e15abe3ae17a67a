#include "kpband/run.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "kpband/errors.hpp"

#ifndef KPBAND_VERSION
#define KPBAND_VERSION "unknown"
#endif

namespace kpband {

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (const auto& h : header) cell(h);
    end_row();
  }

  CsvWriter& cell(std::string_view text) {
    if (!first_) out_ += ',';
    out_ += text;
    first_ = false;
    return *this;
  }
  CsvWriter& number(double v) { return cell(format_number(v)); }
  CsvWriter& integer(long v) { return cell(std::to_string(v)); }
  void end_row() {
    out_ += '\n';
    first_ = true;
  }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
  bool first_ = true;
};

std::vector<std::string> energy_columns(int k, const std::string& unit) {
  std::vector<std::string> out;
  for (int m = 1; m <= k; ++m) out.push_back("E_" + std::to_string(m) + " [" + unit + "]");
  return out;
}

Artifact bands_csv(const RunConfig& c) {
  const auto result = sweep(c.potential(), c.cell_grid(), c.samples, c.bands, c.band_options(), c.normalize);
  std::vector<std::string> header{"kappa_frac [1]"};
  for (auto& col : energy_columns(c.bands, "hartree")) header.push_back(col);
  if (result.normalized) {
    for (int m = 1; m <= c.bands; ++m) header.push_back("E_" + std::to_string(m) + "/E_ref [1]");
  }
  CsvWriter csv(header);
  for (std::size_t j = 0; j < result.kappa_fracs.size(); ++j) {
    csv.number(result.kappa_fracs[j]);
    for (double e : result.energies[j]) csv.number(e);
    if (result.normalized) {
      for (double e : (*result.normalized)[j]) csv.number(e);
    }
    csv.end_row();
  }
  return {"bands.csv", std::move(csv).str()};
}

Artifact edges_csv(const RunConfig& c) {
  const auto edges = c.edge_method == EdgeMethod::analytic
                         ? band_edges(DispersionFn(c.potential()), c.bands)
                         : fdm_band_edges(c.potential(), c.cell_grid(), c.bands, c.band_options());
  CsvWriter csv({"band [index]", "e_min [hartree]", "e_max [hartree]"});
  for (const auto& b : edges.bands) {
    csv.integer(b.band).number(b.e_min).number(b.e_max);
    csv.end_row();
  }
  return {"edges.csv", std::move(csv).str()};
}

Artifact compare_csv(const RunConfig& c) {
  const auto report = compare_with_analytic(c.potential(), c.cell_grid(), c.bands, c.band_options());
  CsvWriter csv({"band [index]", "analytic_min [hartree]", "analytic_max [hartree]", "fdm_min [hartree]",
                 "fdm_max [hartree]", "dev_min [hartree]", "dev_max [hartree]"});
  for (const auto& r : report.rows) {
    csv.integer(r.band).number(r.analytic_min).number(r.analytic_max);
    csv.number(r.fdm_min).number(r.fdm_max).number(r.dev_min).number(r.dev_max);
    csv.end_row();
  }
  return {"compare.csv", std::move(csv).str()};
}

Artifact wavefunction_csv(const RunConfig& c) {
  const auto grid = GridSpec::for_period(c.period(), c.grid_n, c.periods);
  const int highest = *std::max_element(c.states.begin(), c.states.end());
  if (highest > grid.n_points()) {
    throw ConfigError("states", "state " + std::to_string(highest) + " exceeds the " +
                                    std::to_string(grid.n_points()) + " grid points");
  }
  const auto spectrum = box_states(c.potential(), grid, c.kappa_frac, highest, c.band_options());
  CsvWriter csv({"state [index]", "x [bohr]", "re_psi [bohr^-1/2]", "im_psi [bohr^-1/2]", "abs2 [bohr^-1]"});
  for (int s : c.states) {
    const auto& psi = spectrum.pairs[static_cast<std::size_t>(s - 1)].wavefunction;
    for (int i = 0; i < grid.n_points(); ++i) {
      const cplx v = psi[static_cast<std::size_t>(i)];
      csv.integer(s).number(grid.coordinate(i + 1)).number(v.real()).number(v.imag()).number(std::norm(v));
      csv.end_row();
    }
  }
  return {"wavefunction.csv", std::move(csv).str()};
}

Artifact spectrum_csv(const RunConfig& c) {
  const auto states = discrete_spectrum(c.potential(), c.cell_grid(), c.ring_periods, c.bands, c.band_options());
  std::vector<std::string> header{"l [index]", "kappa [1/bohr]"};
  for (auto& col : energy_columns(c.bands, "hartree")) header.push_back(col);
  CsvWriter csv(header);
  for (const auto& s : states) {
    csv.integer(s.l).number(s.kappa);
    for (double e : s.energies) csv.number(e);
    csv.end_row();
  }
  return {"spectrum.csv", std::move(csv).str()};
}

Artifact convergence_csv(const RunConfig& c, double& order) {
  const auto report = convergence_study(c.potential(), c.kappa_frac, c.band, c.sizes, c.band_options());
  CsvWriter csv({"N [points]", "h [bohr]", "E [hartree]", "error [hartree]"});
  for (const auto& level : report.levels) {
    csv.integer(level.n).number(level.step).number(level.energy).number(level.error);
    csv.end_row();
  }
  order = report.order;
  return {"convergence.csv", std::move(csv).str()};
}

Artifact manifest(const RunConfig& c, Command command) {
  std::string text = "version = " + std::string(version()) + "\n";
  text += "command = " + std::string(command_name(command)) + "\n";
  for (const auto& [key, value] : c.resolved()) text += key + " = " + value + "\n";
  return {"manifest.txt", std::move(text)};
}

std::vector<Artifact> render_impl(const RunConfig& c, Command command, std::string& summary) {
  std::vector<Artifact> out;
  switch (command) {
    case Command::bands: out.push_back(bands_csv(c)); break;
    case Command::edges: out.push_back(edges_csv(c)); break;
    case Command::compare: out.push_back(compare_csv(c)); break;
    case Command::wavefunction: out.push_back(wavefunction_csv(c)); break;
    case Command::spectrum: out.push_back(spectrum_csv(c)); break;
    case Command::converge: {
      double order = 0.0;
      out.push_back(convergence_csv(c, order));
      summary = "fitted order p = " + format_number(order);
      break;
    }
  }
  out.push_back(manifest(c, command));
  return out;
}

}  // namespace

Command parse_command(std::string_view name) {
  for (auto cmd : {Command::bands, Command::edges, Command::compare, Command::wavefunction, Command::spectrum,
                   Command::converge}) {
    if (command_name(cmd) == name) return cmd;
  }
  throw ConfigError("command", "unknown command '" + std::string(name) +
                                   "' (bands, edges, compare, wavefunction, spectrum, converge)");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::bands: return "bands";
    case Command::edges: return "edges";
    case Command::compare: return "compare";
    case Command::wavefunction: return "wavefunction";
    case Command::spectrum: return "spectrum";
    case Command::converge: return "converge";
  }
  return "?";
}

const char* version() noexcept { return KPBAND_VERSION; }

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

std::vector<Artifact> render(const RunConfig& config, Command command) {
  std::string summary;
  return render_impl(config, command, summary);
}

int run(const RunConfig& config, Command command, const std::filesystem::path& out_dir, std::ostream& info,
        std::ostream& diag) {
  std::vector<Artifact> artifacts;
  std::string summary;
  try {
    artifacts = render_impl(config, command, summary);
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    diag << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    diag << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    diag << "numerical failure: " << e.what() << '\n';
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    diag << "cannot create " << out_dir.string() << ": " << ec.message() << '\n';
    return 1;
  }
  for (const auto& a : artifacts) {
    const auto path = out_dir / a.name;
    std::ofstream file(path, std::ios::binary);
    file << a.contents;
    if (!file) {
      diag << "cannot write " << path.string() << '\n';
      return 1;
    }
    info << "wrote " << path.string() << '\n';
  }
  if (!summary.empty()) info << summary << '\n';
  return 0;
}

}  // namespace kpband
