#include "fdrl/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "fdrl/rng.hpp"

namespace fdrl {

NullCdf build_gstar(const SweepConfig& cfg, const Lattice& p, const Lattice& pstar,
                    const NeighborhoodTable& nbrs, std::uint64_t seed) {
    switch (cfg.method) {
        case Method::method1:
            return method1_ghat(pstar);
        case Method::method1_normal:
            return NullCdf::normal_approx(nbrs.nominal_k);
        case Method::method2: {
            Method2Options opts;
            opts.reps = cfg.method2_reps;
            opts.n0_lambda = cfg.n0_lambda;
            return method2_ghat(p, pstar, nbrs, cfg.lambda, seed, opts);
        }
        case Method::beta:
            if (nbrs.nominal_k % 2 == 1) return NullCdf::beta_analytic(nbrs.nominal_k);
            return mc_median_null_cdf(nbrs.nominal_k, cfg.mc_draws, seed);
    }
    throw invalid_spec_error("unknown method");
}

ReplicateOutcome run_replicate(const SweepConfig& cfg, const NeighborhoodTable& nbrs,
                               std::uint64_t seed) {
    auto [y, truth] = generate(cfg.scenario, seed);
    const Lattice p = pvalues_one_sided(y, cfg.scenario.p_value_model());
    const Lattice pstar = aggregate(p, nbrs, cfg.filter);
    const NullCdf gstar = build_gstar(cfg, p, pstar, nbrs, seed);

    ReplicateOutcome out;
    out.seed = seed;
    out.method2_fallback = gstar.method1_fallback;
    for (double alpha : cfg.alphas) {
        FdrCurve cf = fdr_curve(p, cfg.lambda, alpha);
        FdrCurve cl = fdrl_curve(pstar, cfg.lambda, alpha, gstar);

        ProcedureOutcome of;
        of.alpha = alpha;
        of.t_alpha = cf.t_alpha;
        of.rejections = cf.rejections;
        RejectionMask mf = reject(p, cf.t_alpha);
        of.metrics = metrics(mf, truth);
        if (cfg.keep_masks) of.mask = std::move(mf);
        out.fdr.push_back(std::move(of));

        ProcedureOutcome ol;
        ol.alpha = alpha;
        ol.t_alpha = cl.t_alpha;
        ol.rejections = cl.rejections;
        RejectionMask ml = reject(pstar, cl.t_alpha);
        ol.metrics = metrics(ml, truth);
        if (cfg.keep_masks) ol.mask = std::move(ml);
        out.fdrl.push_back(std::move(ol));
    }
    return out;
}

std::vector<ReplicateOutcome> run_sweep(const SweepConfig& cfg) {
    if (cfg.replicates < 1) throw invalid_spec_error("sweep: replicates must be >= 1");
    const NeighborhoodTable nbrs = build_neighborhoods(cfg.scenario.dims, cfg.neighborhood);
    std::vector<ReplicateOutcome> results(static_cast<std::size_t>(cfg.replicates));

    const int jobs = std::max(1, std::min(cfg.jobs, cfg.replicates));
    if (jobs == 1) {
        for (int r = 0; r < cfg.replicates; ++r)
            results[static_cast<std::size_t>(r)] =
                run_replicate(cfg, nbrs, replicate_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        return results;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.replicates) return;
            try {
                results[static_cast<std::size_t>(r)] = run_replicate(
                    cfg, nbrs, replicate_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

std::string sweep_csv(const SweepConfig& cfg, const std::vector<ReplicateOutcome>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "replicate,seed,procedure,alpha,lambda,t_alpha,rejections,"
           "S,T,U,V,W,R,n0,n1,sensitivity,specificity,fdp\n";
    auto emit = [&](int rep, std::uint64_t seed, const char* proc, const ProcedureOutcome& o) {
        out << rep << ',' << seed << ',' << proc << ',' << o.alpha << ',' << cfg.lambda << ','
            << o.t_alpha << ',' << o.rejections << ',' << o.metrics.s << ',' << o.metrics.t
            << ',' << o.metrics.u << ',' << o.metrics.v << ',' << o.metrics.w << ','
            << o.metrics.r << ',' << o.metrics.n0 << ',' << o.metrics.n1 << ',';
        if (o.metrics.sensitivity) out << *o.metrics.sensitivity;
        out << ',';
        if (o.metrics.specificity) out << *o.metrics.specificity;
        out << ',' << o.metrics.fdp << '\n';
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& o : rows[r].fdr) emit(static_cast<int>(r), rows[r].seed, "fdr", o);
        for (const auto& o : rows[r].fdrl) emit(static_cast<int>(r), rows[r].seed, "fdrl", o);
    }
    return out.str();
}

}  // namespace fdrl
