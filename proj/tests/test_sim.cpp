#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fdrl/neighborhood.hpp"
#include "fdrl/sim.hpp"
#include "test_util.hpp"

using namespace fdrl;

TEST_CASE("generation is reproducible and seed-sensitive") {
    for (auto scenario : {Scenario::exponential(std::log(8.0)), Scenario::example1({64, 64}),
                          Scenario::example2({64, 64}), Scenario::example3({64, 64})}) {
        auto [y1, t1] = generate(scenario, 11);
        auto [y2, t2] = generate(scenario, 11);
        CHECK(y1.values == y2.values);
        CHECK(t1.values == t2.values);
        auto [y3, t3] = generate(scenario, 12);
        CHECK(y3.values != y1.values);
        CHECK(t3.values == t1.values);  // layout does not depend on the seed
    }
}

TEST_CASE("exponential scenario: signal covers exactly 16 percent at base dims") {
    auto scenario = Scenario::exponential(std::log(8.0));
    auto [y, truth] = generate(scenario, 3);
    CHECK(truth.size() == 2500);
    CHECK(truth.count() == 400);  // 0.16 * 2500

    // null sites carry centered noise
    double mean = 0.0;
    std::size_t n0 = 0;
    for (std::size_t v = 0; v < y.size(); ++v)
        if (!truth.values[v]) {
            mean += y.values[v];
            ++n0;
        }
    mean /= double(n0);
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(double(n0)));

    // signal sites are shifted up by C
    double smean = 0.0;
    for (std::size_t v = 0; v < y.size(); ++v)
        if (truth.values[v]) smean += y.values[v];
    smean /= 400.0;
    CHECK(smean == doctest::Approx(std::log(8.0)).epsilon(0.2));
}

TEST_CASE("example1 error field has unit variance") {
    auto scenario = Scenario::example1();  // full 258 x 258
    auto [y, truth] = generate(scenario, 21);
    double sum = 0.0, sum2 = 0.0;
    std::size_t n0 = 0;
    for (std::size_t v = 0; v < y.size(); ++v)
        if (!truth.values[v]) {
            sum += y.values[v];
            sum2 += y.values[v] * y.values[v];
            ++n0;
        }
    const double mean = sum / double(n0);
    const double var = sum2 / double(n0) - mean * mean;
    CHECK(std::fabs(var - 1.0) < 0.02);
    CHECK(std::fabs(mean) < 0.02);
}

TEST_CASE("example2 error field has unit variance under strong correlation") {
    auto [y, truth] = generate(Scenario::example2(), 22);
    double sum = 0.0, sum2 = 0.0;
    std::size_t n0 = 0;
    for (std::size_t v = 0; v < y.size(); ++v)
        if (!truth.values[v]) {
            sum += y.values[v];
            sum2 += y.values[v] * y.values[v];
            ++n0;
        }
    const double mean = sum / double(n0);
    const double var = sum2 / double(n0) - mean * mean;
    CHECK(std::fabs(var - 1.0) < 0.1);  // 7x7 averaging leaves few effective draws
}

TEST_CASE("example1 desk-scale override keeps the two-rectangle layout") {
    auto scenario = Scenario::example1({128, 128});
    CHECK(scenario.rects.size() == 2);
    CHECK(scenario.rects[0].mu == 4.0);
    CHECK(scenario.rects[1].mu == 2.0);
    CHECK(scenario.rects[0].height == 30);  // 60 scaled by 128/258
    CHECK(scenario.rects[1].height == 15);
    auto [y, truth] = generate(scenario, 1);
    CHECK(truth.count() == 30 * 30 + 15 * 15);
}

TEST_CASE("example3 layout is boundary-heavy") {
    auto scenario = Scenario::example3({128, 128});
    auto [y, truth] = generate(scenario, 2);
    auto nbrs = build_neighborhoods(scenario.dims, NeighborhoodSpec::cross5());
    std::size_t boundary = 0, nulls = 0;
    for (std::size_t v = 0; v < truth.size(); ++v) {
        if (truth.values[v]) continue;
        ++nulls;
        for (auto u : nbrs.of(v))
            if (truth.values[u]) {
                ++boundary;
                break;
            }
    }
    CHECK(nulls > 0);
    CHECK(double(boundary) / double(nulls) > 0.3);
}

TEST_CASE("one-sided p-values") {
    auto exp_model = DistModel::exponential_shift(std::log(8.0));
    Lattice y({1, 3});
    y.values = {-1.0, -1.0 + std::log(2.0), -2.0};
    auto p = pvalues_one_sided(y, exp_model);
    CHECK(p.values[0] == 1.0);  // support boundary
    CHECK(p.values[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.values[2] == 1.0);  // clamped below the support

    auto norm_model = DistModel::normal(2.0, 1.0);
    Lattice z({1, 1});
    z.values = {0.0};
    CHECK(pvalues_one_sided(z, norm_model).values[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("null p-values of the exponential scenario are uniform") {
    auto scenario = Scenario::exponential(std::log(8.0));
    auto [y, truth] = generate(scenario, 7);
    auto p = pvalues_one_sided(y, scenario.p_value_model());
    std::vector<double> null_p;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (!truth.values[v]) null_p.push_back(p.values[v]);
    const double ks = testutil::ks_distance(null_p, [](double t) { return t; });
    CHECK(ks < 2.0 * 1.36 / std::sqrt(double(null_p.size())));
}

TEST_CASE("metrics: hand cases") {
    TruthMask truth({1, 4});
    truth.values = {1, 0, 0, 0};

    SUBCASE("mask equals truth") {
        RejectionMask mask = truth;
        auto m = metrics(mask, truth);
        CHECK(*m.sensitivity == 1.0);
        CHECK(*m.specificity == 1.0);
        CHECK(m.fdp == 0.0);
    }
    SUBCASE("all-reject") {
        RejectionMask mask({1, 4}, 1);
        auto m = metrics(mask, truth);
        CHECK(*m.sensitivity == 1.0);
        CHECK(*m.specificity == 0.0);
        CHECK(m.fdp == doctest::Approx(3.0 / 4.0));
    }
    SUBCASE("partial overlap") {
        RejectionMask mask({1, 4});
        mask.values = {1, 1, 0, 0};
        auto m = metrics(mask, truth);
        CHECK(*m.sensitivity == 1.0);
        CHECK(*m.specificity == doctest::Approx(2.0 / 3.0));
        CHECK(m.fdp == doctest::Approx(0.5));
    }
    SUBCASE("empty mask: fdp uses the R v 1 guard") {
        RejectionMask mask({1, 4}, 0);
        auto m = metrics(mask, truth);
        CHECK(m.fdp == 0.0);
        CHECK(m.r == 0);
    }
}

TEST_CASE("metrics: count identities on random masks") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        TruthMask truth({8, 8});
        RejectionMask mask({8, 8});
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth.values[i] = rng() & 1;
            mask.values[i] = rng() & 1;
        }
        auto m = metrics(mask, truth);
        CHECK(m.u + m.v == m.n0);
        CHECK(m.t + m.s == m.n1);
        CHECK(m.w + m.r == truth.size());
        CHECK(m.n0 + m.n1 == truth.size());
    }
}

TEST_CASE("metrics: degenerate truth masks") {
    TruthMask all_signal({2, 2}, 1);
    RejectionMask mask({2, 2}, 1);
    auto m = metrics(mask, all_signal);
    CHECK_FALSE(m.specificity.has_value());
    CHECK(m.sensitivity.has_value());

    TruthMask all_null({2, 2}, 0);
    auto m2 = metrics(mask, all_null);
    CHECK_FALSE(m2.sensitivity.has_value());
    CHECK(m2.specificity.has_value());

    RejectionMask wrong({3, 2});
    CHECK_THROWS_AS(metrics(wrong, all_null), dims_mismatch_error);
}

TEST_CASE("malformed scenarios are rejected") {
    auto s = Scenario::exponential(std::log(8.0));
    s.rects[0].width = 1000;
    CHECK_THROWS_AS(generate(s, 1), invalid_spec_error);
    CHECK_THROWS_AS(Scenario::exponential(-1.0), invalid_spec_error);
    CHECK_THROWS_AS(Scenario::example1({258}), invalid_spec_error);
}
