#pragma once

#include <stdexcept>
#include <string>

namespace fdrl {

// Invalid configuration: bad dims, bad neighborhood spec, out-of-range tuning
// parameters, malformed input files.
struct invalid_spec_error : std::runtime_error {
    explicit invalid_spec_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two lattices (or a lattice and a neighborhood table) do not share dimensions.
struct dims_mismatch_error : std::runtime_error {
    explicit dims_mismatch_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The null-distribution estimate is unusable: G*(lambda) = 1, or the
// upper-tail count D of the empirical estimator is zero.
struct degenerate_null_error : std::runtime_error {
    explicit degenerate_null_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fdrl
