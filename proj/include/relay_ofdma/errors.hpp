#pragma once

#include <stdexcept>
#include <string>

namespace relay_ofdma {

// Bad scenario or experiment parameters. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be opened or written. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// An allocation broke one of the feasibility constraints. `constraint()`
// names which one (e.g. "total power budget").
class InfeasibleAllocation : public std::runtime_error {
 public:
  InfeasibleAllocation(std::string constraint, const std::string& detail)
      : std::runtime_error(constraint + ": " + detail),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace relay_ofdma
