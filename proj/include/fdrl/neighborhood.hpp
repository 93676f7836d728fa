#pragma once

// Neighborhood construction on 2D/3D lattices. A site's neighborhood always
// contains the site itself; the size k counts it.

#include <cstdint>
#include <span>
#include <vector>

#include "fdrl/lattice.hpp"

namespace fdrl {

enum class NeighborhoodShape { cross2d5, cross3d7, knn, radius };

// truncate: out-of-image arms are dropped (border sites have k_v < k).
// mirror: out-of-image coordinates reflect about the border cell
// (index -1 -> 1), keeping k_v = k everywhere; reflected entries may
// duplicate in-image neighbors. knn ignores the policy: it always finds
// k in-image sites.
enum class BorderPolicy { truncate, mirror };

struct NeighborhoodSpec {
    NeighborhoodShape shape = NeighborhoodShape::cross2d5;
    BorderPolicy border = BorderPolicy::truncate;
    int k = 0;       // knn only
    double r = 0.0;  // radius only

    static NeighborhoodSpec cross5(BorderPolicy b = BorderPolicy::truncate) {
        return {NeighborhoodShape::cross2d5, b, 0, 0.0};
    }
    static NeighborhoodSpec cross7(BorderPolicy b = BorderPolicy::truncate) {
        return {NeighborhoodShape::cross3d7, b, 0, 0.0};
    }
    static NeighborhoodSpec nearest(int k) {
        return {NeighborhoodShape::knn, BorderPolicy::truncate, k, 0.0};
    }
    static NeighborhoodSpec ball(double r, BorderPolicy b = BorderPolicy::truncate) {
        return {NeighborhoodShape::radius, b, 0, r};
    }
};

// Per-site neighbor lists in CSR layout. Lists are deterministic: the site
// itself first, then shape order (cross/radius) or (distance, flat index)
// order (knn).
struct NeighborhoodTable {
    std::vector<int> dims;
    std::vector<std::uint32_t> offsets;    // size n+1
    std::vector<std::uint32_t> neighbors;  // flat site indices
    int nominal_k = 0;                     // interior neighborhood size

    std::size_t sites() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const std::uint32_t> of(std::size_t site) const {
        return {neighbors.data() + offsets[site],
                static_cast<std::size_t>(offsets[site + 1] - offsets[site])};
    }
    std::size_t degree(std::size_t site) const { return offsets[site + 1] - offsets[site]; }
};

NeighborhoodTable build_neighborhoods(const std::vector<int>& dims, const NeighborhoodSpec& spec);

}  // namespace fdrl
