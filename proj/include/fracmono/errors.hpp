#pragma once

#include <stdexcept>

namespace fracmono {

// Malformed call arguments: shape mismatches, values outside an operation's domain.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scenario / grid configuration problems. Messages name the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical procedure could not complete: factorization breakdown, eigensolver
// non-convergence, residual blow-up, failed internal consistency check.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured size cap would be exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fracmono
