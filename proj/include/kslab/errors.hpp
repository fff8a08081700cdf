#pragma once

#include <stdexcept>
#include <string>

namespace kslab {

// Rejected before any computation starts (bad file, bad field, violated
// precondition). CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised mid-run (CFL violation, negative density beyond rounding, capture
// failure escalation). CLI exit code 3.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace kslab
