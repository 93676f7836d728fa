// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runtime limits are enforced where stated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fdrl/aggregate.hpp"
#include "fdrl/fdr.hpp"
#include "fdrl/lip.hpp"
#include "fdrl/pipeline.hpp"
#include "fdrl/rng.hpp"
#include "fdrl/sim.hpp"
#include "test_util.hpp"

using namespace fdrl;
using nlohmann::json;

namespace {

const double kTableC[8] = {std::log(8.0),  std::log(12.0), std::log(16.0), std::log(20.0),
                           std::log(24.0), std::log(28.0), std::log(32.0), std::log(36.0)};
const char* kTableLabels[8] = {"log8",  "log12", "log16", "log20",
                               "log24", "log28", "log32", "log36"};
const double kTableFdr[8] = {0.4130, 0.3043, 0.2471, 0.2079, 0.1795, 0.1579, 0.1409, 0.1273};
const double kTableFdrl[8] = {0.0103, 0.0030, 0.0013, 0.0007, 0.0004, 0.0002, 0.0002, 0.0001};

std::vector<MetricsReport> g_metrics_log;  // checked again by criterion 11

MetricsReport log_metrics(MetricsReport m) {
    g_metrics_log.push_back(m);
    return m;
}

Lattice uniform_lattice(const std::vector<int>& dims, std::uint64_t seed) {
    Lattice p(dims);
    std::mt19937_64 rng(seed);
    for (auto& v : p.values) v = double(rng() >> 11) * 0x1.0p-53;
    return p;
}

// ---- criterion 1: published-table reproduction through the CLI ----------

bool criterion_table2(std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / "fdrl_acceptance_alpha_inf.json";
    std::string cmd = std::string(FDRL_CLI_PATH) + " alpha-inf --model exp --lambda 0.1 --pi0 0.84 --C";
    for (const char* label : kTableLabels) cmd += std::string(" ") + label;
    cmd += " > " + out.string();
    if (std::system(cmd.c_str()) != 0) {
        log << "CLI invocation failed";
        return false;
    }
    std::ifstream in(out);
    json reports = json::parse(in);
    fs::remove(out);
    if (reports.size() != 8) {
        log << "expected 8 reports";
        return false;
    }
    bool ok = true;
    for (int i = 0; i < 8; ++i) {
        const double a = reports[i]["alpha_inf_fdr"].get<double>();
        const double b = reports[i]["alpha_inf_fdrl"].get<double>();
        if (std::fabs(a - kTableFdr[i]) > 5e-5 || std::fabs(b - kTableFdrl[i]) > 5e-5) {
            log << kTableLabels[i] << ": " << a << "/" << b << " off table ";
            ok = false;
        }
    }
    return ok;
}

// ---- criterion 2: analytic vs numeric agreement --------------------------

bool criterion_numeric_agreement(std::ostream& log) {
    GridSpec grid;  // 10^4 points down to 1e-8
    bool ok = true;
    for (int i = 0; i < 8; ++i) {
        const auto rep =
            alpha_inf_numeric(DistModel::exponential_shift(kTableC[i]), 0.1, 0.84, 5, grid);
        const double a = alpha_inf_exponential(kTableC[i], 0.1, 0.84, Procedure::fdr);
        const double b = alpha_inf_exponential(kTableC[i], 0.1, 0.84, Procedure::fdrl_k5);
        if (std::fabs(rep.alpha_inf_fdr - a) > 1e-3 ||
            std::fabs(rep.alpha_inf_fdrl - b) > 1e-3) {
            log << kTableLabels[i] << " numeric/analytic gap ";
            ok = false;
        }
    }
    return ok;
}

// ---- criterion 3: lack-of-identification demonstration -------------------

bool criterion_lip_demo(std::ostream& log) {
    const auto scenario = Scenario::exponential(std::log(8.0));
    const auto nbrs = build_neighborhoods(scenario.dims, NeighborhoodSpec::cross5());
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto [y, truth] = generate(scenario, seed);
        const Lattice p = pvalues_one_sided(y, scenario.p_value_model());
        bool all_positive = true;
        for (double v : p.values) all_positive &= (v > 0.0);

        const FdrCurve fdr_low = fdr_curve(p, 0.1, 0.05);
        const FdrCurve fdr_high = fdr_curve(p, 0.1, 0.45);
        const Lattice pstar = aggregate(p, nbrs, FilterKind::median);
        const FdrCurve fdrl_low = fdrl_curve(pstar, 0.1, 0.05, method1_ghat(pstar));
        log_metrics(metrics(reject(pstar, fdrl_low.t_alpha), truth));

        const bool pass = all_positive && fdr_low.rejections == 0 &&
                          fdrl_low.rejections >= 1 && fdr_high.rejections >= 1;
        passes += pass;
    }
    log << passes << "/10 seeds";
    return passes >= 9;
}

// ---- criterion 4: k = 1 equivalence ---------------------------------------

bool criterion_k1_equivalence(std::ostream& log) {
    std::mt19937_64 dims_rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const int h = 4 + int(dims_rng() % 13), w = 4 + int(dims_rng() % 13);
        const Lattice p = uniform_lattice({h, w}, 7000 + std::uint64_t(trial));
        const auto nbrs = build_neighborhoods(p.dims, NeighborhoodSpec::nearest(1));
        const Lattice pstar = aggregate(p, nbrs, FilterKind::median);
        const NullCdf uniform = NullCdf::uniform();
        for (double alpha : {0.01, 0.05, 0.1}) {
            const FdrCurve cf = fdr_curve(p, 0.1, alpha);
            const FdrCurve cl = fdrl_curve(pstar, 0.1, alpha, uniform);
            if (cf.thresholds != cl.thresholds || cf.estimates != cl.estimates) {
                log << "estimate mismatch at trial " << trial;
                return false;
            }
            if (reject(p, cf.t_alpha).values != reject(pstar, cl.t_alpha).values) {
                log << "mask mismatch at trial " << trial;
                return false;
            }
        }
    }
    log << "100 lattices bit-identical";
    return true;
}

// ---- criterion 5: null law of the aggregated p*-value ---------------------

bool criterion_null_law(std::ostream& log) {
    std::mt19937_64 rng(848);
    const std::size_t draws = 1000000;
    std::vector<double> medians(draws);
    double buf[5];
    for (auto& m : medians) {
        for (double& b : buf) b = double(rng() >> 11) * 0x1.0p-53;
        std::nth_element(buf, buf + 2, buf + 5);
        m = buf[2];
    }
    const double d =
        testutil::ks_distance(medians, [](double t) { return beta_median_cdf(5, t); });
    log << "KS = " << d;
    return d < 0.002;
}

// ---- criterion 6: Method I consistency on an all-null lattice -------------

bool criterion_method1_consistency(std::ostream& log) {
    const Lattice p = uniform_lattice({500, 500}, 20100848);
    const auto nbrs =
        build_neighborhoods(p.dims, NeighborhoodSpec::cross5(BorderPolicy::mirror));
    const Lattice pstar = aggregate(p, nbrs, FilterKind::median);
    const NullCdf ghat = method1_ghat(pstar);
    const double d =
        testutil::sup_step_vs_cdf(ghat, [](double t) { return beta_median_cdf(5, t); });
    log << "sup = " << d;
    return d < 0.01;
}

// ---- criterion 7: Method II against the truth-mask oracle -----------------

bool criterion_method2_oracle(std::ostream& log) {
    const auto scenario = Scenario::example1({128, 128});
    const auto nbrs = build_neighborhoods(scenario.dims, NeighborhoodSpec::cross5());
    int good = 0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const std::uint64_t seed = replicate_seed(500, rep);
        auto [y, truth] = generate(scenario, seed);
        const Lattice p = pvalues_one_sided(y, scenario.p_value_model());
        const Lattice pstar = aggregate(p, nbrs, FilterKind::median);
        const NullCdf gc = method2_ghat(p, pstar, nbrs, 0.1, seed);

        std::vector<double> null_pstar;
        for (std::size_t v = 0; v < pstar.size(); ++v)
            if (!truth.values[v]) null_pstar.push_back(pstar.values[v]);
        const NullCdf oracle = ecdf(null_pstar);
        const double d = testutil::sup_step_vs_step(gc, oracle);
        good += (d < 0.05);

        log_metrics(metrics(reject(pstar, fdrl_curve(pstar, 0.1, 0.05, gc).t_alpha), truth));
    }
    log << good << "/20 within 0.05";
    return good >= 18;
}

// ---- criterion 8: sensitivity/specificity/FDP ordering --------------------

bool criterion_metric_ordering(std::ostream& log) {
    const auto scenario = Scenario::example1({128, 128});
    const std::vector<double> alphas{0.01, 0.05, 0.1};
    bool ok = true;
    for (double lambda : {0.1, 0.4}) {
        SweepConfig cfg;
        cfg.scenario = scenario;
        cfg.seed = 900;
        cfg.replicates = 20;
        cfg.alphas = alphas;
        cfg.lambda = lambda;
        cfg.method = Method::method1;
        cfg.jobs = 4;
        const auto rows = run_sweep(cfg);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            double sens_f = 0, sens_l = 0, spec_f = 0, spec_l = 0, fdp_f = 0, fdp_l = 0;
            for (const auto& row : rows) {
                log_metrics(row.fdr[a].metrics);
                log_metrics(row.fdrl[a].metrics);
                sens_f += row.fdr[a].metrics.sensitivity.value_or(0.0);
                sens_l += row.fdrl[a].metrics.sensitivity.value_or(0.0);
                spec_f += row.fdr[a].metrics.specificity.value_or(0.0);
                spec_l += row.fdrl[a].metrics.specificity.value_or(0.0);
                fdp_f += row.fdr[a].metrics.fdp;
                fdp_l += row.fdrl[a].metrics.fdp;
            }
            const double n = double(rows.size());
            sens_f /= n, sens_l /= n, spec_f /= n, spec_l /= n, fdp_f /= n, fdp_l /= n;
            if (!(sens_l >= sens_f && spec_f >= 0.99 && spec_l >= 0.99 && fdp_l <= fdp_f)) {
                log << "ordering fails at alpha=" << alphas[a] << " lambda=" << lambda << " ";
                log << "(sens " << sens_f << "/" << sens_l << ", spec " << spec_f << "/"
                    << spec_l << ", fdp " << fdp_f << "/" << fdp_l << ") ";
                ok = false;
            }
        }
    }
    return ok;
}

// ---- criterion 9: Beta(a,a) shape lemma ------------------------------------

bool criterion_beta_lemma(std::ostream& log) {
    for (int k : {3, 5, 7}) {
        const int grid = 10000;
        double prev_ratio = 0.0;
        for (int i = 1; i < grid; ++i) {
            const double t = double(i) / grid;
            const double b = beta_median_cdf(k, t);
            if (t < 0.5) {
                if (!(b < t)) {
                    log << "B(t) < t fails at k=" << k << " t=" << t;
                    return false;
                }
                const double ratio = b / t;
                if (!(ratio > prev_ratio)) {
                    log << "B(t)/t monotonicity fails at k=" << k << " t=" << t;
                    return false;
                }
                prev_ratio = ratio;
            } else if (t > 0.5) {
                if (!(b > t)) {
                    log << "B(t) > t fails at k=" << k << " t=" << t;
                    return false;
                }
            }
            if (std::fabs(b + beta_median_cdf(k, 1.0 - t) - 1.0) > 1e-12) {
                log << "symmetry fails at k=" << k << " t=" << t;
                return false;
            }
        }
        prev_ratio = 0.0;
    }
    log << "3 x 9999 grid points";
    return true;
}

// ---- criterion 10: identification regimes ----------------------------------

bool criterion_regimes(std::ostream& log) {
    GridSpec grid;
    bool ok = true;

    const auto normal1 = alpha_inf_numeric(DistModel::normal(2.0, 1.0), 0.1, 0.84, 5, grid);
    if (!(normal1.fdr_levels[1] < normal1.fdr_levels[0] && normal1.alpha_inf_fdr < 1e-3 &&
          normal1.alpha_inf_fdrl < 1e-3)) {
        log << "normal sigma=1 did not shrink below 1e-3 ";
        ok = false;
    }

    const auto normal05 = alpha_inf_numeric(DistModel::normal(2.0, 0.5), 0.1, 0.84, 5, grid);
    const bool stab_fdr = normal05.fdr_levels[1] > 0.999 * normal05.fdr_levels[0] ||
                          normal05.fdr_levels[1] == normal05.fdr_levels[0];
    const bool stab_fdrl = normal05.fdrl_levels[1] > 0.999 * normal05.fdrl_levels[0];
    if (!(normal05.alpha_inf_fdr > 1e-2 && stab_fdr && normal05.alpha_inf_fdrl > 0.0 &&
          stab_fdrl)) {
        log << "normal sigma=0.5 did not stabilize above 1e-2 ";
        ok = false;
    }

    const auto expo = alpha_inf_numeric(DistModel::exponential_shift(std::log(8.0)), 0.1,
                                        0.84, 5, grid);
    if (!(expo.alpha_inf_fdr > expo.alpha_inf_fdrl)) {
        log << "exponential dominance fails ";
        ok = false;
    }

    const auto t_gap = alpha_inf_numeric(DistModel::student_t(2.0, 5.0, 1.0), 0.1, 0.84, 5, grid);
    if (!(t_gap.fdr_levels[1] < t_gap.fdr_levels[0] && t_gap.alpha_inf_fdr < 1e-3 &&
          t_gap.alpha_inf_fdrl < 1e-3)) {
        log << "student-t d0>d1 did not shrink ";
        ok = false;
    }

    const auto t_eq = alpha_inf_numeric(DistModel::student_t(2.0, 3.0, 3.0), 0.1, 0.84, 5, grid);
    const bool t_stab = t_eq.fdr_levels[1] > 0.99 * t_eq.fdr_levels[0];
    if (!(t_eq.alpha_inf_fdr > 0.0 && t_eq.alpha_inf_fdrl > 0.0 && t_stab &&
          t_eq.alpha_inf_fdr >= t_eq.alpha_inf_fdrl)) {
        log << "student-t d0=d1 regime fails ";
        ok = false;
    }
    return ok;
}

// ---- criterion 11: confusion-table identities -------------------------------

bool criterion_count_identities(std::ostream& log) {
    std::mt19937_64 rng(1111);
    for (int trial = 0; trial < 200; ++trial) {
        TruthMask truth({6, 7});
        RejectionMask mask({6, 7});
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth.values[i] = rng() & 1;
            mask.values[i] = rng() & 1;
        }
        log_metrics(metrics(mask, truth));
    }
    std::size_t checked = 0;
    for (const auto& m : g_metrics_log) {
        if (m.u + m.v != m.n0 || m.t + m.s != m.n1 || m.w + m.r != m.n0 + m.n1) {
            log << "identity violated";
            return false;
        }
        ++checked;
    }
    log << checked << " reports checked";
    return true;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
    double limit_seconds;  // 0 = no stated limit
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "table2-reproduction", criterion_table2, 1.0},
        {2, "analytic-numeric-agreement", criterion_numeric_agreement, 10.0},
        {3, "lip-demonstration", criterion_lip_demo, 30.0},
        {4, "k1-equivalence", criterion_k1_equivalence, 0.0},
        {5, "null-law-ks", criterion_null_law, 10.0},
        {6, "method1-consistency", criterion_method1_consistency, 0.0},
        {7, "method2-oracle", criterion_method2_oracle, 0.0},
        {8, "metric-ordering", criterion_metric_ordering, 300.0},
        {9, "beta-shape-lemma", criterion_beta_lemma, 0.0},
        {10, "identification-regimes", criterion_regimes, 0.0},
        {11, "count-identities", criterion_count_identities, 0.0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
            detail << " [over " << c.limit_seconds << " s limit]";
            ok = false;
        }
        failures += !ok;
        std::printf("criterion %02d %-28s %s (%.2f s)%s%s\n", c.id, c.name,
                    ok ? "PASS" : "FAIL", secs, detail.str().empty() ? "" : " - ",
                    detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
