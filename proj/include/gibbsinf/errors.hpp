#pragma once

#include <stdexcept>
#include <string>

namespace gibbsinf {

/// Bad argument or malformed input data. CLI maps this to exit code 2.
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure (non-convergence, overflow of an iteration cap).
/// CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Every parameter node has zero likelihood; the posterior is undefined.
struct DegeneratePosteriorError : NumericError {
    explicit DegeneratePosteriorError(const std::string& what) : NumericError(what) {}
};

}  // namespace gibbsinf
