#pragma once

// Dense d-dimensional (d = 2 or 3) scalar fields stored flat in row-major
// order. The same container holds observations Y, p-values and aggregated
// p*-values; masks use one byte per site.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fdrl/errors.hpp"

namespace fdrl {

inline std::size_t site_count(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

inline void validate_dims(const std::vector<int>& dims) {
    if (dims.size() != 2 && dims.size() != 3)
        throw invalid_spec_error("lattice dims must have length 2 or 3");
    for (int d : dims)
        if (d <= 0) throw invalid_spec_error("lattice dims must be positive");
}

struct Lattice {
    std::vector<int> dims;
    std::vector<double> values;  // row-major, length = product of dims

    Lattice() = default;
    Lattice(std::vector<int> dims_, double fill = 0.0) : dims(std::move(dims_)) {
        validate_dims(dims);
        values.assign(site_count(dims), fill);
    }

    std::size_t size() const { return values.size(); }
    int ndim() const { return static_cast<int>(dims.size()); }
};

struct Mask {
    std::vector<int> dims;
    std::vector<std::uint8_t> values;  // 0 or 1

    Mask() = default;
    explicit Mask(std::vector<int> dims_, std::uint8_t fill = 0) : dims(std::move(dims_)) {
        validate_dims(dims);
        values.assign(site_count(dims), fill);
    }

    std::size_t size() const { return values.size(); }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto v : values) c += (v != 0);
        return c;
    }
};

// v in V1 (signal) is truth.values[i] != 0; rejection masks mark rejected sites.
using TruthMask = Mask;
using RejectionMask = Mask;

inline bool same_dims(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

inline void require_same_dims(const std::vector<int>& a, const std::vector<int>& b,
                              const char* what) {
    if (!same_dims(a, b)) throw dims_mismatch_error(std::string(what) + ": dims mismatch");
}

// p-value containers must stay inside [0,1].
inline void validate_unit_range(const Lattice& p, const char* what) {
    for (double v : p.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw invalid_spec_error(std::string(what) + ": value outside [0,1]");
}

// flat index <-> coordinates, row-major (last dimension fastest)
inline std::size_t flat_index(const std::vector<int>& dims, const std::vector<int>& coord) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims.size(); ++a)
        idx = idx * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(coord[a]);
    return idx;
}

inline std::vector<int> coord_of(const std::vector<int>& dims, std::size_t flat) {
    std::vector<int> c(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        c[a] = static_cast<int>(flat % static_cast<std::size_t>(dims[a]));
        flat /= static_cast<std::size_t>(dims[a]);
    }
    return c;
}

}  // namespace fdrl
