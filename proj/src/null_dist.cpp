#include "fdrl/null_dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdrl/rng.hpp"
#include "fdrl/special.hpp"

namespace fdrl {

namespace {

double binom_coef(int k, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c *= double(k - j + i) / double(i);
    return c;
}

// value of a right-continuous step function at t
double step_eval(const std::vector<double>& knots, const std::vector<double>& values,
                 double t) {
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    if (it == knots.begin()) return 0.0;
    return values[static_cast<std::size_t>(it - knots.begin()) - 1];
}

}  // namespace

double NullCdf::operator()(double t) const {
    switch (kind) {
        case Kind::beta_analytic:
            return beta_median_cdf(k, t);
        case Kind::normal_approx:
            return normal_approx_cdf(k, t);
        case Kind::empirical:
            return step_eval(knots, values, t);
        case Kind::composite: {
            double s = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * components[i](t);
            return s;
        }
    }
    return 0.0;
}

NullCdf NullCdf::beta_analytic(int k) {
    if (k < 1 || k % 2 == 0)
        throw invalid_spec_error("beta_analytic: k must be a positive odd integer");
    NullCdf g;
    g.kind = Kind::beta_analytic;
    g.k = k;
    return g;
}

NullCdf NullCdf::normal_approx(int k) {
    if (k < 5) throw invalid_spec_error("normal_approx: requires k >= 5");
    NullCdf g;
    g.kind = Kind::normal_approx;
    g.k = k;
    return g;
}

NullCdf NullCdf::empirical_steps(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() != values.size() || knots.empty())
        throw invalid_spec_error("empirical_steps: knots/values size mismatch");
    NullCdf g;
    g.kind = Kind::empirical;
    g.knots = std::move(knots);
    g.values = std::move(values);
    return g;
}

NullCdf NullCdf::mixture(std::vector<int> component_j, std::vector<double> weights,
                         std::vector<NullCdf> components) {
    if (weights.size() != components.size() || weights.size() != component_j.size())
        throw invalid_spec_error("mixture: component/weight size mismatch");
    NullCdf g;
    g.kind = Kind::composite;
    g.component_j = std::move(component_j);
    g.weights = std::move(weights);
    g.components = std::move(components);
    return g;
}

double beta_median_cdf(int k, double t) {
    if (k < 1 || k % 2 == 0)
        throw invalid_spec_error(
            "beta_median_cdf: analytic form requires odd k (use a Monte Carlo null for even k)");
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const int m = (k + 1) / 2;
    // P(median <= t) = P(Bin(k, t) >= m); all terms positive, no cancellation
    double s = 0.0;
    for (int j = m; j <= k; ++j) s += binom_coef(k, j) * powi(t, j) * powi(1.0 - t, k - j);
    return std::min(s, 1.0);
}

double normal_approx_cdf(int k, double t) {
    if (k < 5) throw invalid_spec_error("normal_approx_cdf: requires k >= 5");
    // mean 0.5, variance 1/(4(k+2))
    return norm_cdf((t - 0.5) * 2.0 * std::sqrt(double(k) + 2.0));
}

NullCdf ecdf(std::span<const double> sample) {
    if (sample.empty()) throw invalid_spec_error("ecdf: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> knots, values;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        knots.push_back(sorted[i]);
        values.push_back(static_cast<double>(i + 1) / n);
    }
    return NullCdf::empirical_steps(std::move(knots), std::move(values));
}

NullCdf method1_ghat(const Lattice& pstar) {
    validate_unit_range(pstar, "method1_ghat");
    // only the upper tail p* >= 0.5 enters the estimate
    std::vector<double> upper;
    std::size_t n_gt = 0, n_eq = 0;
    for (double v : pstar.values) {
        if (v > 0.5) {
            upper.push_back(v);
            ++n_gt;
        } else if (v == 0.5) {
            upper.push_back(v);
            ++n_eq;
        }
    }
    const double d = 2.0 * static_cast<double>(n_gt) + static_cast<double>(n_eq);
    if (d == 0.0)
        throw degenerate_null_error(
            "method1_ghat: no p*-values at or above 0.5 (D = 0); increase lambda or expect "
            "all-signal saturation");
    std::sort(upper.begin(), upper.end());

    auto count_ge = [&](double x) {  // #{p* >= x} for x >= 0.5
        return static_cast<double>(upper.end() -
                                   std::lower_bound(upper.begin(), upper.end(), x));
    };
    auto count_gt = [&](double x) {  // #{p* > x} for x >= 0.5
        return static_cast<double>(upper.end() -
                                   std::upper_bound(upper.begin(), upper.end(), x));
    };
    auto ghat_at = [&](double t) {
        if (t <= 0.5) return count_ge(1.0 - t) / d;
        return 1.0 - count_gt(t) / d;
    };

    // jump points: t = 1-u on [0, 0.5] and t = u on (0.5, 1]
    std::vector<double> knots{0.0, 0.5, 1.0};
    for (double u : upper) {
        knots.push_back(1.0 - u);  // exact for u in [0.5, 1]
        if (u > 0.5) knots.push_back(u);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) values[i] = ghat_at(knots[i]);
    return NullCdf::empirical_steps(std::move(knots), std::move(values));
}

double estimate_n0(const Lattice& pstar, double lambda, const NullCdf& gstar) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw invalid_spec_error("estimate_n0: lambda must lie in (0,1)");
    const double g = gstar(lambda);
    if (g >= 1.0)
        throw degenerate_null_error("estimate_n0: G*(lambda) = 1, estimator undefined");
    std::size_t w = 0;
    for (double v : pstar.values) w += (v > lambda);
    double n0 = static_cast<double>(w) / (1.0 - g);
    return std::clamp(n0, 0.0, static_cast<double>(pstar.size()));
}

namespace {

// j distinct draws from [0, n) by rejection; j is small
void draw_distinct(std::mt19937_64& eng, std::size_t n, int j, std::vector<std::size_t>& out) {
    out.clear();
    while (static_cast<int>(out.size()) < j) {
        std::size_t c = uniform_index(eng, n);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
}

}  // namespace

NullCdf method2_ghat(const Lattice& p, const Lattice& pstar, const NeighborhoodTable& nbrs,
                     double lambda, std::uint64_t seed, const Method2Options& opts) {
    require_same_dims(p.dims, pstar.dims, "method2_ghat");
    require_same_dims(p.dims, nbrs.dims, "method2_ghat");
    if (opts.reps < 1) throw invalid_spec_error("method2_ghat: reps must be >= 1");
    const std::size_t n = p.size();
    const int k = nbrs.nominal_k;

    // step 1: n0 from the Method I estimate
    NullCdf ghat = method1_ghat(pstar);
    const double n0_hat = estimate_n0(pstar, opts.n0_lambda.value_or(lambda), ghat);
    const auto n0_round = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(n0_hat), 0, static_cast<long long>(n)));
    const std::size_t n1_round = n - n0_round;

    // step 2: V1 = sites with p* <= p*_(n1) (ties join V1), V0 the rest
    std::vector<std::uint8_t> in_v1(n, 0);
    if (n1_round > 0) {
        std::vector<double> sorted(pstar.values);
        std::sort(sorted.begin(), sorted.end());
        const double cut = sorted[n1_round - 1];
        for (std::size_t v = 0; v < n; ++v) in_v1[v] = (pstar.values[v] <= cut);
    }

    // step 3: classify V0 by the contamination count and form the weights
    std::vector<std::vector<std::uint32_t>> v0_by_j(static_cast<std::size_t>(k));
    std::size_t v0_total = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (in_v1[v]) continue;
        ++v0_total;
        int cnt = 0;
        for (auto u : nbrs.of(v)) cnt += (in_v1[u] != 0);
        if (cnt >= k) cnt = k - 1;
        v0_by_j[static_cast<std::size_t>(cnt)].push_back(static_cast<std::uint32_t>(v));
    }

    auto fallback = [&]() {
        NullCdf g = std::move(ghat);
        g.method1_fallback = true;
        return g;
    };
    if (v0_total == 0 || v0_by_j[0].empty()) return fallback();

    std::vector<int> comp_j;
    std::vector<double> weights;
    std::vector<NullCdf> comps;
    // theta as exact partition proportions of V0
    comp_j.push_back(0);
    weights.push_back(static_cast<double>(v0_by_j[0].size()) / static_cast<double>(v0_total));
    comps.push_back(ghat);  // step 4, j = 0: the Method I estimate

    std::vector<std::uint32_t> v1_sites;
    for (std::size_t v = 0; v < n; ++v)
        if (in_v1[v]) v1_sites.push_back(static_cast<std::uint32_t>(v));

    auto eng = make_stream(seed, stream_resample);
    std::vector<std::size_t> excl, pick;
    std::vector<double> pool, medians;
    for (int j = 1; j < k; ++j) {
        if (v0_by_j[static_cast<std::size_t>(j)].empty()) continue;
        // step 4, j >= 1: re-median each clean site with j neighbor p-values
        // swapped for p-values drawn from V1
        medians.clear();
        for (int rep = 0; rep < opts.reps; ++rep) {
            for (auto v : v0_by_j[0]) {
                auto nb = nbrs.of(v);
                const int kv = static_cast<int>(nb.size());
                if (kv < j) continue;
                draw_distinct(eng, nb.size(), j, excl);
                if (v1_sites.size() >= static_cast<std::size_t>(j)) {
                    draw_distinct(eng, v1_sites.size(), j, pick);
                } else {
                    pick.clear();
                    for (int i = 0; i < j; ++i) pick.push_back(uniform_index(eng, v1_sites.size()));
                }
                pool.clear();
                for (std::size_t i = 0; i < nb.size(); ++i)
                    if (std::find(excl.begin(), excl.end(), i) == excl.end())
                        pool.push_back(p.values[nb[i]]);
                for (auto i : pick) pool.push_back(p.values[v1_sites[i]]);
                const std::size_t m = pool.size();
                auto mid = pool.begin() + m / 2;
                std::nth_element(pool.begin(), mid, pool.end());
                double med = *mid;
                if (m % 2 == 0) med = 0.5 * (med + *std::max_element(pool.begin(), mid));
                medians.push_back(med);
            }
        }
        if (medians.empty()) return fallback();
        comp_j.push_back(j);
        weights.push_back(static_cast<double>(v0_by_j[static_cast<std::size_t>(j)].size()) /
                          static_cast<double>(v0_total));
        comps.push_back(ecdf(medians));
    }
    return NullCdf::mixture(std::move(comp_j), std::move(weights), std::move(comps));
}

NullCdf mc_median_null_cdf(int k, std::size_t draws, std::uint64_t seed) {
    if (k < 1) throw invalid_spec_error("mc_median_null_cdf: k must be >= 1");
    if (draws == 0) throw invalid_spec_error("mc_median_null_cdf: draws must be positive");
    auto eng = make_stream(seed, stream_noise);
    std::vector<double> sample(static_cast<std::size_t>(k));
    std::vector<double> medians;
    medians.reserve(draws);
    for (std::size_t i = 0; i < draws; ++i) {
        for (auto& s : sample) s = uniform01(eng);
        auto mid = sample.begin() + sample.size() / 2;
        std::nth_element(sample.begin(), mid, sample.end());
        double med = *mid;
        if (k % 2 == 0) med = 0.5 * (med + *std::max_element(sample.begin(), mid));
        medians.push_back(med);
    }
    return ecdf(medians);
}

}  // namespace fdrl
