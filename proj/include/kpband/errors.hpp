#pragma once

#include <stdexcept>
#include <string>

namespace kpband {

/// An iterative method failed to reach its tolerance within the iteration
/// budget, or a numerical self-check (monotonicity, residual) failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration. `key()` names the offending entry and `line()`
/// is the 1-based line of the config document (0 when not from a file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message, int line = 0)
      : std::runtime_error(format(key, message, line)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += key + ": ";
    return out + message;
  }

  std::string key_;
  int line_;
};

}  // namespace kpband
