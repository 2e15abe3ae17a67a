// kpband: band structures of Kronig-Penney and Dirac comb lattices.
//
//   kpband --command compare --config kp.conf --out results --set grid.n=5000

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpband/errors.hpp"
#include "kpband/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference Bloch band structures with analytic cross-checks"};
  app.set_version_flag("--version", std::string(kpband::version()));

  std::string config_path;
  std::string command_name;
  std::string out_dir = "out";
  std::vector<std::string> assignments;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--command", command_name, "bands | edges | compare | wavefunction | spectrum | converge")
      ->required();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--set", assignments, "override a config key, e.g. --set potential.v0=1.0");
  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream file(config_path, std::ios::binary);
      if (!file) throw kpband::ConfigError("", "cannot read config file " + config_path);
      std::ostringstream buffer;
      buffer << file.rdbuf();
      text = buffer.str();
    }
    std::vector<kpband::Override> overrides;
    for (const auto& a : assignments) overrides.push_back(kpband::parse_override(a));
    const auto command = kpband::parse_command(command_name);
    const auto config = kpband::parse_config(text, overrides);
    return kpband::run(config, command, out_dir, std::cout, std::cerr);
  } catch (const kpband::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}
