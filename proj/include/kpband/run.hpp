#pragma once

// Command dispatch for the CLI: each command renders CSV artifacts and a
// manifest in memory, then writes them once.

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kpband/config.hpp"

namespace kpband {

enum class Command { bands, edges, compare, wavefunction, spectrum, converge };

/// Throws ConfigError for an unknown name.
Command parse_command(std::string_view name);
std::string_view command_name(Command command);

const char* version() noexcept;

struct Artifact {
  std::string name;      ///< file name inside the output directory
  std::string contents;
};

/// 12 significant digits, scientific, '.' decimal point; -0 prints as 0.
std::string format_number(double value);

/// Runs the computation and returns the CSV file plus manifest.txt.
/// Throws like the underlying modules.
std::vector<Artifact> render(const RunConfig& config, Command command);

/// render() and write into out_dir (created if missing). Returns the exit
/// status: 0 success, 1 configuration or I/O error, 2 numerical failure.
/// Errors go to `diag`, one-line summaries to `info`.
int run(const RunConfig& config, Command command, const std::filesystem::path& out_dir, std::ostream& info,
        std::ostream& diag);

}  // namespace kpband
