#pragma once

#include <stdexcept>
#include <string>

namespace rps {

/// Malformed or inconsistent configuration (bad field values, bad files).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Offered load at or above capacity (rho >= 1, or sum(lambda) >= C).
struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Load is nominally stable but the polling formulas leave their valid
/// region (chi_i <= 0, nonpositive denominator, P{Q >= 1} > 1).
struct FeasibilityError : std::runtime_error {
  explicit FeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Root finder failed to converge within its iteration cap.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rps
