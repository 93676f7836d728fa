#pragma once

// End-to-end runs: scenario -> Y -> p -> p* -> curves/masks/metrics, for one
// replicate or a parallel sweep over replicates. Replicate r uses base seed
// `seed + r`, so a sweep replicate is bit-identical to the equivalent chain
// of single-shot runs with that seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdrl/aggregate.hpp"
#include "fdrl/fdr.hpp"
#include "fdrl/sim.hpp"

namespace fdrl {

enum class Method { method1, method1_normal, method2, beta };

struct ProcedureOutcome {
    double alpha = 0.0;
    double t_alpha = 0.0;
    std::size_t rejections = 0;
    MetricsReport metrics;
    RejectionMask mask;  // filled only when keep_masks is set
};

struct ReplicateOutcome {
    std::uint64_t seed = 0;
    std::vector<ProcedureOutcome> fdr;   // one entry per alpha
    std::vector<ProcedureOutcome> fdrl;  // one entry per alpha
    bool method2_fallback = false;
};

struct SweepConfig {
    Scenario scenario;
    std::uint64_t seed = 1;
    int replicates = 1;
    std::vector<double> alphas{0.05};
    double lambda = 0.1;
    std::optional<double> n0_lambda;  // Method II n0 step, defaults to lambda
    NeighborhoodSpec neighborhood = NeighborhoodSpec::cross5();
    FilterKind filter = FilterKind::median;
    Method method = Method::method1;
    int method2_reps = 1;
    std::size_t mc_draws = 200000;  // beta method with even k
    int jobs = 1;
    bool keep_masks = false;
};

// Null CDF for the configured method, from already aggregated data.
NullCdf build_gstar(const SweepConfig& cfg, const Lattice& p, const Lattice& pstar,
                    const NeighborhoodTable& nbrs, std::uint64_t seed);

ReplicateOutcome run_replicate(const SweepConfig& cfg, const NeighborhoodTable& nbrs,
                               std::uint64_t seed);

std::vector<ReplicateOutcome> run_sweep(const SweepConfig& cfg);

// replicate,seed,procedure,alpha,lambda,t_alpha,rejections,counts...,ratios
std::string sweep_csv(const SweepConfig& cfg, const std::vector<ReplicateOutcome>& rows);

}  // namespace fdrl
