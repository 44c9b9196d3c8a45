#pragma once

#include <stdexcept>
#include <string>

namespace lakevortex {

/// Invalid input: bad config, geometry violations, preconditions. CLI exit 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure: solver divergence, NaN states. CLI exit 2.
struct NumericalError : std::runtime_error {
    double residual = 0.0;
    NumericalError(const std::string& msg, double res = 0.0)
        : std::runtime_error(msg), residual(res) {}
};

} // namespace lakevortex
