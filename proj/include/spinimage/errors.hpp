#pragma once

#include <stdexcept>
#include <string>

namespace spinimage {

/// Invalid input data (bad dimensions, negative weights, schema violations).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematically infeasible input, e.g. a distribution supported only on
/// zero-weight configurations, or a field annihilating a distribution.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration budget exceeded.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinimage
