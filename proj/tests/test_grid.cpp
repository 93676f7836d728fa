#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "fdrl/neighborhood.hpp"

using namespace fdrl;

namespace {

std::set<std::size_t> neighbor_set(const NeighborhoodTable& t, std::size_t v) {
    auto nb = t.of(v);
    return {nb.begin(), nb.end()};
}

std::size_t flat(const std::vector<int>& dims, std::initializer_list<int> c) {
    return flat_index(dims, std::vector<int>(c));
}

}  // namespace

TEST_CASE("cross2d5 interior site") {
    const std::vector<int> dims{50, 50};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::cross5());
    const auto v = flat(dims, {10, 10});
    CHECK(table.degree(v) == 5);
    const std::set<std::size_t> expect{flat(dims, {10, 10}), flat(dims, {9, 10}),
                                       flat(dims, {11, 10}), flat(dims, {10, 9}),
                                       flat(dims, {10, 11})};
    CHECK(neighbor_set(table, v) == expect);
    CHECK(table.nominal_k == 5);
}

TEST_CASE("cross2d5 truncate corner") {
    const std::vector<int> dims{50, 50};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::cross5(BorderPolicy::truncate));
    const auto v = flat(dims, {0, 0});
    CHECK(table.degree(v) == 3);
    const std::set<std::size_t> expect{flat(dims, {0, 0}), flat(dims, {1, 0}),
                                       flat(dims, {0, 1})};
    CHECK(neighbor_set(table, v) == expect);
}

TEST_CASE("cross3d7 interior site") {
    const std::vector<int> dims{8, 8, 8};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::cross7());
    const auto v = flat_index(dims, {4, 4, 4});
    CHECK(table.degree(v) == 7);
    std::set<std::size_t> expect;
    expect.insert(v);
    for (int a = 0; a < 3; ++a)
        for (int s : {-1, 1}) {
            std::vector<int> c{4, 4, 4};
            c[a] += s;
            expect.insert(flat_index(dims, c));
        }
    CHECK(neighbor_set(table, v) == expect);
    CHECK(table.nominal_k == 7);
}

TEST_CASE("self membership and no duplicates under truncate") {
    const std::vector<int> dims{9, 7};
    for (auto spec : {NeighborhoodSpec::cross5(), NeighborhoodSpec::nearest(4),
                      NeighborhoodSpec::ball(1.5)}) {
        auto table = build_neighborhoods(dims, spec);
        for (std::size_t v = 0; v < site_count(dims); ++v) {
            auto nb = table.of(v);
            CHECK(std::count(nb.begin(), nb.end(), v) == 1);
            std::set<std::size_t> uniq(nb.begin(), nb.end());
            CHECK(uniq.size() == nb.size());
            for (auto u : nb) CHECK(u < site_count(dims));
        }
    }
}

TEST_CASE("mirror keeps k constant; self still present") {
    const std::vector<int> dims{6, 5};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::cross5(BorderPolicy::mirror));
    for (std::size_t v = 0; v < site_count(dims); ++v) {
        CHECK(table.degree(v) == 5);
        auto nb = table.of(v);
        CHECK(std::count(nb.begin(), nb.end(), v) >= 1);
    }
    auto t3 = build_neighborhoods({4, 4, 4}, NeighborhoodSpec::cross7(BorderPolicy::mirror));
    for (std::size_t v = 0; v < site_count({4, 4, 4}); ++v) CHECK(t3.degree(v) == 7);
}

TEST_CASE("cross symmetry at interior sites") {
    const std::vector<int> dims{12, 11};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::cross5());
    for (int i = 1; i + 1 < dims[0]; ++i)
        for (int j = 1; j + 1 < dims[1]; ++j) {
            const auto v = flat(dims, {i, j});
            for (auto u : table.of(v)) {
                auto nu = table.of(u);
                CHECK(std::count(nu.begin(), nu.end(), v) == 1);
            }
        }
}

TEST_CASE("translation invariance of interior neighbor offsets") {
    const std::vector<int> dims{20, 20};
    std::mt19937_64 rng(7);
    for (auto spec : {NeighborhoodSpec::cross5(), NeighborhoodSpec::nearest(9),
                      NeighborhoodSpec::ball(2.0)}) {
        auto table = build_neighborhoods(dims, spec);
        for (int trial = 0; trial < 25; ++trial) {
            const int i = 5 + int(rng() % 9), j = 5 + int(rng() % 9);
            const int di = int(rng() % 3) - 1, dj = int(rng() % 3) - 1;
            auto offsets_of = [&](int r, int c) {
                std::set<std::pair<int, int>> offs;
                for (auto u : table.of(flat(dims, {r, c}))) {
                    auto q = coord_of(dims, u);
                    offs.insert({q[0] - r, q[1] - c});
                }
                return offs;
            };
            CHECK(offsets_of(i, j) == offsets_of(i + di, j + dj));
        }
    }
}

TEST_CASE("knn k=5 matches the plus shape at interior sites") {
    const std::vector<int> dims{15, 15};
    auto knn = build_neighborhoods(dims, NeighborhoodSpec::nearest(5));
    auto cross = build_neighborhoods(dims, NeighborhoodSpec::cross5());
    const auto v = flat(dims, {7, 7});
    CHECK(neighbor_set(knn, v) == neighbor_set(cross, v));
}

TEST_CASE("knn border sites still reach k") {
    const std::vector<int> dims{10, 10};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::nearest(6));
    for (std::size_t v = 0; v < site_count(dims); ++v) CHECK(table.degree(v) == 6);
}

TEST_CASE("knn ties broken by flat site order") {
    // at (1,1) on a 3x3 grid: four axis neighbors at d^2=1, four corners at
    // d^2=2; knn(7) takes self, all four at d^2=1, then the two smallest
    // corner indices
    const std::vector<int> dims{3, 3};
    auto table = build_neighborhoods(dims, NeighborhoodSpec::nearest(7));
    const auto v = flat(dims, {1, 1});
    const std::set<std::size_t> expect{flat(dims, {1, 1}), flat(dims, {0, 1}),
                                       flat(dims, {1, 0}), flat(dims, {1, 2}),
                                       flat(dims, {2, 1}), flat(dims, {0, 0}),
                                       flat(dims, {0, 2})};
    CHECK(neighbor_set(table, v) == expect);
}

TEST_CASE("invalid specs throw") {
    CHECK_THROWS_AS(build_neighborhoods({5, 5}, NeighborhoodSpec::nearest(26)),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({5, 5}, NeighborhoodSpec::nearest(0)),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({5, 5}, NeighborhoodSpec::ball(0.0)),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({5, 5}, NeighborhoodSpec::cross7()),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({5, 5, 5}, NeighborhoodSpec::cross5()),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({0, 5}, NeighborhoodSpec::cross5()),
                    invalid_spec_error);
    CHECK_THROWS_AS(build_neighborhoods({5}, NeighborhoodSpec::cross5()), invalid_spec_error);
}

TEST_CASE("lattice invariants") {
    Lattice lat({3, 4}, 0.25);
    CHECK(lat.size() == 12);
    CHECK(lat.values.size() == site_count(lat.dims));
    validate_unit_range(lat, "test");
    lat.values[5] = 1.5;
    CHECK_THROWS_AS(validate_unit_range(lat, "test"), invalid_spec_error);

    CHECK(coord_of({3, 4}, flat_index({3, 4}, {2, 1})) == std::vector<int>{2, 1});
    CHECK(coord_of({2, 3, 4}, flat_index({2, 3, 4}, {1, 2, 3})) == std::vector<int>{1, 2, 3});
}
