#pragma once

// Synthetic lattice scenarios and detection metrics.
//
// The 2D scenarios draw Y = mu + eps. Example 1 uses a 5-point moving
// average of an i.i.d. N(0,1) parent field (one cell wider on each side)
// scaled by 1/sqrt(5); example 2 uses a 7x7 window scaled by 1/7; example 3
// reuses the example-1 errors with a stripe layout that puts most null
// sites next to signal. The exponential scenario uses i.i.d. centered
// Exp(1) noise with signal on 16% of the sites.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fdrl/dist_model.hpp"
#include "fdrl/lattice.hpp"

namespace fdrl {

struct SignalRect {
    int r0 = 0, c0 = 0, height = 0, width = 0;
    double mu = 0.0;
};

struct Scenario {
    enum class Kind { example1, example2, example3, exponential };

    Kind kind = Kind::example1;
    std::vector<int> dims;
    std::vector<SignalRect> rects;
    double C = 0.0;  // exponential signal height

    static Scenario example1(const std::vector<int>& dims = {258, 258});
    static Scenario example2(const std::vector<int>& dims = {258, 258});
    static Scenario example3(const std::vector<int>& dims = {258, 258});
    static Scenario exponential(double C, const std::vector<int>& dims = {50, 50});

    // model whose F0 matches the scenario's null marginal, for the p-value
    // transform
    DistModel p_value_model() const;
};

std::pair<Lattice, TruthMask> generate(const Scenario& scenario, std::uint64_t seed);

// p(v) = 1 - F0(Y(v)), clamped into [0,1] outside the support
Lattice pvalues_one_sided(const Lattice& y, const DistModel& model);

struct MetricsReport {
    std::size_t u = 0, v = 0;  // true nulls retained / rejected
    std::size_t t = 0, s = 0;  // false nulls retained / rejected
    std::size_t w = 0, r = 0;  // total retained / rejected
    std::size_t n0 = 0, n1 = 0;
    std::optional<double> sensitivity;  // S/n1, absent when n1 = 0
    std::optional<double> specificity;  // U/n0, absent when n0 = 0
    double fdp = 0.0;                   // V/(R v 1)
};

MetricsReport metrics(const RejectionMask& mask, const TruthMask& truth);

}  // namespace fdrl
