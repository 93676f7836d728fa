#include "fdrl/aggregate.hpp"

#include <algorithm>
#include <vector>

namespace fdrl {

namespace {

// median by partial selection; buf is clobbered
double median_of(std::vector<double>& buf) {
    const std::size_t m = buf.size();
    auto mid = buf.begin() + m / 2;
    std::nth_element(buf.begin(), mid, buf.end());
    if (m % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(buf.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

Lattice aggregate(const Lattice& p, const NeighborhoodTable& nbrs, FilterKind filter) {
    require_same_dims(p.dims, nbrs.dims, "aggregate");
    validate_unit_range(p, "aggregate");

    Lattice out(p.dims);
    std::vector<double> buf;
    const std::size_t n = p.size();
    for (std::size_t v = 0; v < n; ++v) {
        auto nb = nbrs.of(v);
        if (filter == FilterKind::mean) {
            double s = 0.0;
            for (auto u : nb) s += p.values[u];
            out.values[v] = s / static_cast<double>(nb.size());
        } else {
            buf.clear();
            for (auto u : nb) buf.push_back(p.values[u]);
            out.values[v] = median_of(buf);
        }
    }
    return out;
}

}  // namespace fdrl
