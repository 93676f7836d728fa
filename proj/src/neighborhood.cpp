#include "fdrl/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fdrl {

namespace {

// reflect about the border cell: -1 -> 1, n -> n-2
int mirror_coord(int c, int n) {
    if (n == 1) return 0;
    while (c < 0 || c >= n) {
        if (c < 0) c = -c;
        if (c >= n) c = 2 * (n - 1) - c;
    }
    return c;
}

std::vector<std::vector<int>> cross_offsets(int ndim) {
    std::vector<std::vector<int>> offs;
    offs.push_back(std::vector<int>(ndim, 0));  // self first
    for (int a = 0; a < ndim; ++a)
        for (int s : {-1, +1}) {
            std::vector<int> o(ndim, 0);
            o[a] = s;
            offs.push_back(o);
        }
    return offs;
}

std::vector<std::vector<int>> radius_offsets(int ndim, double r) {
    int R = static_cast<int>(std::floor(r));
    std::vector<std::vector<int>> offs;
    std::vector<int> o(ndim, 0);
    // enumerate the box [-R, R]^d, self first, then row-major order
    offs.push_back(o);
    auto dist2 = [](const std::vector<int>& v) {
        double s = 0;
        for (int x : v) s += double(x) * x;
        return s;
    };
    std::vector<int> cur(ndim, -R);
    while (true) {
        bool self = std::all_of(cur.begin(), cur.end(), [](int x) { return x == 0; });
        if (!self && dist2(cur) <= r * r) offs.push_back(cur);
        int a = ndim - 1;
        while (a >= 0 && ++cur[a] > R) cur[a--] = -R;
        if (a < 0) break;
    }
    return offs;
}

void append_fixed_shape(const std::vector<int>& dims, std::size_t site,
                        const std::vector<std::vector<int>>& offs, BorderPolicy border,
                        std::vector<std::uint32_t>& out) {
    const auto c = coord_of(dims, site);
    std::vector<int> q(dims.size());
    for (const auto& o : offs) {
        bool inside = true;
        for (std::size_t a = 0; a < dims.size(); ++a) {
            q[a] = c[a] + o[a];
            if (q[a] < 0 || q[a] >= dims[a]) inside = false;
        }
        if (!inside) {
            if (border == BorderPolicy::truncate) continue;
            for (std::size_t a = 0; a < dims.size(); ++a) q[a] = mirror_coord(q[a], dims[a]);
        }
        out.push_back(static_cast<std::uint32_t>(flat_index(dims, q)));
    }
}

void append_knn(const std::vector<int>& dims, std::size_t site, int k,
                std::vector<std::uint32_t>& out) {
    const auto c = coord_of(dims, site);
    const int ndim = static_cast<int>(dims.size());

    // Grow a box of radius R: every site at Euclidean distance <= R lies in
    // it, so once it holds >= k such sites the true k nearest are among them.
    // R capped at the lattice diameter, where the filter passes every site.
    double diag2 = 0;
    for (int a = 0; a < ndim; ++a) diag2 += double(dims[a] - 1) * (dims[a] - 1);
    const int max_r = static_cast<int>(std::ceil(std::sqrt(diag2))) + 1;

    std::vector<std::pair<double, std::uint32_t>> cand;
    for (int R = 1; R <= max_r; ++R) {
        cand.clear();
        std::vector<int> lo(ndim), hi(ndim), cur(ndim);
        for (int a = 0; a < ndim; ++a) {
            lo[a] = std::max(0, c[a] - R);
            hi[a] = std::min(dims[a] - 1, c[a] + R);
            cur[a] = lo[a];
        }
        while (true) {
            double d2 = 0;
            for (int a = 0; a < ndim; ++a) {
                double d = cur[a] - c[a];
                d2 += d * d;
            }
            if (d2 <= double(R) * R)
                cand.emplace_back(d2, static_cast<std::uint32_t>(flat_index(dims, cur)));
            int a = ndim - 1;
            while (a >= 0 && ++cur[a] > hi[a]) cur[a--] = lo[a];
            if (a < 0) break;
        }
        if (static_cast<int>(cand.size()) >= k) break;
    }
    // ties in distance broken by flat (lexicographic) site order
    std::sort(cand.begin(), cand.end());
    for (int i = 0; i < k && i < static_cast<int>(cand.size()); ++i)
        out.push_back(cand[i].second);
}

}  // namespace

NeighborhoodTable build_neighborhoods(const std::vector<int>& dims,
                                      const NeighborhoodSpec& spec) {
    validate_dims(dims);
    const std::size_t n = site_count(dims);
    const int ndim = static_cast<int>(dims.size());

    std::vector<std::vector<int>> offs;
    int nominal_k = 0;
    switch (spec.shape) {
        case NeighborhoodShape::cross2d5:
            if (ndim != 2) throw invalid_spec_error("cross2d5 requires 2D dims");
            offs = cross_offsets(2);
            nominal_k = 5;
            break;
        case NeighborhoodShape::cross3d7:
            if (ndim != 3) throw invalid_spec_error("cross3d7 requires 3D dims");
            offs = cross_offsets(3);
            nominal_k = 7;
            break;
        case NeighborhoodShape::knn:
            if (spec.k < 1) throw invalid_spec_error("knn requires k >= 1");
            if (static_cast<std::size_t>(spec.k) > n)
                throw invalid_spec_error("knn k exceeds the number of lattice sites");
            nominal_k = spec.k;
            break;
        case NeighborhoodShape::radius:
            if (!(spec.r > 0.0)) throw invalid_spec_error("radius requires r > 0");
            offs = radius_offsets(ndim, spec.r);
            nominal_k = static_cast<int>(offs.size());
            break;
    }

    NeighborhoodTable table;
    table.dims = dims;
    table.nominal_k = nominal_k;
    table.offsets.resize(n + 1);
    table.neighbors.reserve(n * static_cast<std::size_t>(nominal_k));
    table.offsets[0] = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (spec.shape == NeighborhoodShape::knn)
            append_knn(dims, v, spec.k, table.neighbors);
        else
            append_fixed_shape(dims, v, offs, spec.border, table.neighbors);
        table.offsets[v + 1] = static_cast<std::uint32_t>(table.neighbors.size());
    }
    return table;
}

}  // namespace fdrl
