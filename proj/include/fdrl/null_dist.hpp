#pragma once

// Null distribution G* of locally aggregated p*-values.
//
// Under independent uniform nulls the median of k p-values (k odd) follows
// Beta((k+1)/2, (k+1)/2); for k >= 5 a normal with mean 0.5 and variance
// 1/(4(k+2)) approximates it. Method I estimates G* from the upper tail of
// the observed p*-values; Method II refines it with a mixture over the
// number j of signal-contaminated neighbors.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fdrl/lattice.hpp"
#include "fdrl/neighborhood.hpp"

namespace fdrl {

struct NullCdf {
    enum class Kind { beta_analytic, normal_approx, empirical, composite };

    Kind kind = Kind::beta_analytic;
    int k = 1;                            // beta_analytic / normal_approx
    std::vector<double> knots, values;    // empirical step function
    std::vector<int> component_j;         // composite: contamination count j
    std::vector<double> weights;          // composite: theta_{n,j}, sums to 1
    std::vector<NullCdf> components;      // composite: Q*_j estimates
    bool method1_fallback = false;        // Method II fell back to Method I

    double operator()(double t) const;

    static NullCdf beta_analytic(int k);
    static NullCdf normal_approx(int k);
    static NullCdf empirical_steps(std::vector<double> knots, std::vector<double> values);
    static NullCdf mixture(std::vector<int> component_j, std::vector<double> weights,
                           std::vector<NullCdf> components);

    // uniform null: the k = 1 Beta, evaluates to exactly t
    static NullCdf uniform() { return beta_analytic(1); }
};

// CDF of Beta((k+1)/2, (k+1)/2) at t, for odd k >= 1. Computed as the
// binomial upper sum P(at least (k+1)/2 of k uniforms <= t); even k throws.
double beta_median_cdf(int k, double t);

// Normal approximation N(0.5, 1/(4(k+2))) for k >= 5.
double normal_approx_cdf(int k, double t);

// Plain right-continuous empirical CDF of a sample.
NullCdf ecdf(std::span<const double> sample);

// Method I: symmetric upper-tail empirical estimate of G*.
NullCdf method1_ghat(const Lattice& pstar);

// n0_hat = #{p*_i > lambda} / (1 - G*(lambda)), clamped to [0, n].
double estimate_n0(const Lattice& pstar, double lambda, const NullCdf& gstar);

struct Method2Options {
    int reps = 1;  // resampling repetitions per site per j; CDFs are pooled
    std::optional<double> n0_lambda;  // lambda for the n0 step, defaults to lambda
};

// Method II: composite estimate sum_j theta_j Q*_j. Deterministic given seed.
// When no uncontaminated null sites are available, falls back to Method I
// and sets method1_fallback on the result.
NullCdf method2_ghat(const Lattice& p, const Lattice& pstar, const NeighborhoodTable& nbrs,
                     double lambda, std::uint64_t seed, const Method2Options& opts = {});

// Monte Carlo stand-in for the analytic null when k is even.
NullCdf mc_median_null_cdf(int k, std::size_t draws, std::uint64_t seed);

}  // namespace fdrl
