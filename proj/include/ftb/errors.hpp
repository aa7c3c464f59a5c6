#pragma once

#include <stdexcept>
#include <string>

namespace ftb {

// Evaluation outside the slit tangent bundle (y = 0) or off a required
// submanifold (e.g. indicatrix points for contact operations).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Mixed partials above the supported order.
struct UnsupportedOrderError : std::invalid_argument {
    explicit UnsupportedOrderError(const std::string& what) : std::invalid_argument(what) {}
};

// Fundamental tensor not positive definite at the probed point.
struct DegenerateMetricError : std::runtime_error {
    explicit DegenerateMetricError(const std::string& what) : std::runtime_error(what) {}
};

// Finite-difference oracle cannot produce a trustworthy value (step underflow).
struct OracleUnstableError : std::runtime_error {
    explicit OracleUnstableError(const std::string& what) : std::runtime_error(what) {}
};

// Bad run configuration (unknown metric, malformed point, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ftb
