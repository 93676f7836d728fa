#include "fdrl/sim.hpp"

#include <algorithm>
#include <cmath>

#include "fdrl/rng.hpp"

namespace fdrl {

namespace {

int scaled(int base_value, int base_dim, int dim) {
    return static_cast<int>(std::lround(double(base_value) * double(dim) / double(base_dim)));
}

std::vector<SignalRect> scale_rects(const std::vector<SignalRect>& base,
                                    const std::vector<int>& base_dims,
                                    const std::vector<int>& dims) {
    std::vector<SignalRect> out;
    for (const auto& r : base) {
        SignalRect s;
        s.r0 = scaled(r.r0, base_dims[0], dims[0]);
        s.c0 = scaled(r.c0, base_dims[1], dims[1]);
        s.height = std::max(1, scaled(r.height, base_dims[0], dims[0]));
        s.width = std::max(1, scaled(r.width, base_dims[1], dims[1]));
        s.mu = r.mu;
        out.push_back(s);
    }
    return out;
}

void check_rects(const std::vector<SignalRect>& rects, const std::vector<int>& dims) {
    for (const auto& r : rects)
        if (r.r0 < 0 || r.c0 < 0 || r.r0 + r.height > dims[0] || r.c0 + r.width > dims[1])
            throw invalid_spec_error("scenario: signal rectangle outside the lattice");
}

TruthMask paint_truth(const std::vector<int>& dims, const std::vector<SignalRect>& rects) {
    TruthMask truth(dims);
    for (const auto& rect : rects)
        for (int i = rect.r0; i < rect.r0 + rect.height; ++i)
            for (int j = rect.c0; j < rect.c0 + rect.width; ++j)
                truth.values[std::size_t(i) * dims[1] + j] = 1;
    return truth;
}

Lattice paint_mu(const std::vector<int>& dims, const std::vector<SignalRect>& rects) {
    Lattice mu(dims);
    for (const auto& rect : rects)
        for (int i = rect.r0; i < rect.r0 + rect.height; ++i)
            for (int j = rect.c0; j < rect.c0 + rect.width; ++j)
                mu.values[std::size_t(i) * dims[1] + j] = rect.mu;
    return mu;
}

// moving-average error field from an i.i.d. N(0,1) parent one window wider
Lattice ma_errors(const std::vector<int>& dims, std::uint64_t seed, bool wide_window) {
    const int pad = wide_window ? 6 : 2;
    const int ph = dims[0] + pad, pw = dims[1] + pad;
    std::vector<double> parent(std::size_t(ph) * pw);
    GaussSampler gauss(make_stream(seed, stream_noise));
    for (auto& e : parent) e = gauss();
    auto at = [&](int i, int j) { return parent[std::size_t(i) * pw + j]; };

    Lattice eps(dims);
    if (!wide_window) {
        // 5-point cross over parent coords (i+1, j+1), scaled by 1/sqrt(5)
        const double scale = 1.0 / std::sqrt(5.0);
        for (int i = 0; i < dims[0]; ++i)
            for (int j = 0; j < dims[1]; ++j) {
                const int pi = i + 1, pj = j + 1;
                eps.values[std::size_t(i) * dims[1] + j] =
                    (at(pi - 1, pj) + at(pi, pj) + at(pi + 1, pj) + at(pi, pj - 1) +
                     at(pi, pj + 1)) *
                    scale;
            }
    } else {
        // 7x7 window sum scaled by 1/7
        for (int i = 0; i < dims[0]; ++i)
            for (int j = 0; j < dims[1]; ++j) {
                double s = 0.0;
                for (int a = 0; a < 7; ++a)
                    for (int b = 0; b < 7; ++b) s += at(i + a, j + b);
                eps.values[std::size_t(i) * dims[1] + j] = s / 7.0;
            }
    }
    return eps;
}

}  // namespace

Scenario Scenario::example1(const std::vector<int>& dims) {
    validate_dims(dims);
    if (dims.size() != 2) throw invalid_spec_error("example1 is a 2D scenario");
    Scenario s;
    s.kind = Kind::example1;
    s.dims = dims;
    const std::vector<SignalRect> base{{39, 39, 60, 60, 4.0}, {160, 142, 30, 30, 2.0}};
    s.rects = scale_rects(base, {258, 258}, dims);
    check_rects(s.rects, dims);
    s.C = 4.0;
    return s;
}

Scenario Scenario::example2(const std::vector<int>& dims) {
    Scenario s = example1(dims);
    s.kind = Kind::example2;
    return s;
}

Scenario Scenario::example3(const std::vector<int>& dims) {
    validate_dims(dims);
    if (dims.size() != 2) throw invalid_spec_error("example3 is a 2D scenario");
    Scenario s;
    s.kind = Kind::example3;
    s.dims = dims;
    // stripes of height 2 with gaps of 2: every null row in the striped
    // region touches signal
    const int c0 = dims[1] / 10;
    const int width = dims[1] - 2 * c0;
    for (int r = dims[0] / 10; r + 2 <= dims[0] - dims[0] / 10; r += 4)
        s.rects.push_back({r, c0, 2, width, 4.0});
    check_rects(s.rects, dims);
    s.C = 4.0;
    return s;
}

Scenario Scenario::exponential(double C, const std::vector<int>& dims) {
    validate_dims(dims);
    if (dims.size() != 2) throw invalid_spec_error("exponential is a 2D scenario");
    if (!(C > 0.0)) throw invalid_spec_error("exponential scenario: C must be > 0");
    Scenario s;
    s.kind = Kind::exponential;
    s.dims = dims;
    s.C = C;
    // two rectangles covering 280 + 120 = 400 = 0.16 * 2500 sites at 50x50
    const std::vector<SignalRect> base{{8, 6, 14, 20, C}, {30, 32, 10, 12, C}};
    s.rects = scale_rects(base, {50, 50}, dims);
    check_rects(s.rects, dims);
    return s;
}

DistModel Scenario::p_value_model() const {
    if (kind == Kind::exponential) return DistModel::exponential_shift(C);
    return DistModel::normal(C, 1.0);  // MA errors have N(0,1) marginals
}

std::pair<Lattice, TruthMask> generate(const Scenario& scenario, std::uint64_t seed) {
    validate_dims(scenario.dims);
    check_rects(scenario.rects, scenario.dims);
    TruthMask truth = paint_truth(scenario.dims, scenario.rects);
    Lattice y = paint_mu(scenario.dims, scenario.rects);

    if (scenario.kind == Scenario::Kind::exponential) {
        auto eng = make_stream(seed, stream_noise);
        for (auto& v : y.values) v += exponential1(eng) - 1.0;
    } else {
        Lattice eps =
            ma_errors(scenario.dims, seed, scenario.kind == Scenario::Kind::example2);
        for (std::size_t v = 0; v < y.size(); ++v) y.values[v] += eps.values[v];
    }
    return {std::move(y), std::move(truth)};
}

Lattice pvalues_one_sided(const Lattice& y, const DistModel& model) {
    Lattice p(y.dims);
    for (std::size_t v = 0; v < y.size(); ++v)
        p.values[v] = std::clamp(model.null_upper_tail(y.values[v]), 0.0, 1.0);
    return p;
}

MetricsReport metrics(const RejectionMask& mask, const TruthMask& truth) {
    require_same_dims(mask.dims, truth.dims, "metrics");
    MetricsReport m;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool rejected = mask.values[i] != 0;
        const bool signal = truth.values[i] != 0;
        if (signal)
            rejected ? ++m.s : ++m.t;
        else
            rejected ? ++m.v : ++m.u;
    }
    m.n0 = m.u + m.v;
    m.n1 = m.s + m.t;
    m.r = m.v + m.s;
    m.w = m.u + m.t;
    if (m.n1 > 0) m.sensitivity = double(m.s) / double(m.n1);
    if (m.n0 > 0) m.specificity = double(m.u) / double(m.n0);
    m.fdp = double(m.v) / double(std::max<std::size_t>(m.r, 1));
    return m;
}

}  // namespace fdrl
