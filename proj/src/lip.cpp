#include "fdrl/lip.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdrl/null_dist.hpp"

namespace fdrl {

namespace {

void check_args(double lambda, double pi0) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw invalid_spec_error("lip: lambda outside (0,1)");
    if (!(pi0 > 0.0 && pi0 <= 1.0)) throw invalid_spec_error("lip: pi0 outside (0,1]");
}

}  // namespace

double limit_fdr(const DistModel& model, double lambda, double pi0, double t) {
    check_args(lambda, pi0);
    if (!(t > 0.0 && t <= 1.0)) throw invalid_spec_error("limit_fdr: t outside (0,1]");
    const double pi1 = 1.0 - pi0;
    const double num = pi0 + pi1 * (1.0 - model.signal_p_cdf(lambda)) / (1.0 - lambda);
    const double den = pi0 + pi1 * model.signal_p_cdf(t) / t;
    return num / den;
}

double limit_fdrl(const DistModel& model, double lambda, double pi0, int k, double t) {
    check_args(lambda, pi0);
    if (!(t > 0.0 && t <= 1.0)) throw invalid_spec_error("limit_fdrl: t outside (0,1]");
    const double pi1 = 1.0 - pi0;
    const double g0_l = beta_median_cdf(k, lambda);
    const double g1_l = beta_median_cdf(k, model.signal_p_cdf(lambda));
    const double g0_t = beta_median_cdf(k, t);
    const double g1_t = beta_median_cdf(k, model.signal_p_cdf(t));
    const double num = pi0 + pi1 * (1.0 - g1_l) / (1.0 - g0_l);
    const double den = pi0 + pi1 * g1_t / g0_t;
    return num / den;
}

double alpha_inf_exponential(double C, double lambda, double pi0, Procedure procedure) {
    check_args(lambda, pi0);
    if (!(C > 0.0)) throw invalid_spec_error("alpha_inf_exponential: C must be > 0");
    const double pi1 = 1.0 - pi0;
    const double ec = std::exp(C);
    if (procedure == Procedure::fdr) {
        const double below = lambda < 1.0 / ec ? 1.0 : 0.0;
        const double num =
            pi0 + pi1 * (1.0 - lambda * ec * below - (1.0 - below)) / (1.0 - lambda);
        return num / (pi0 + pi1 * ec);
    }
    // k = 5: G0* is the Beta(3,3) CDF, G1*(t) = G0*(min(t e^C, 1))
    const double g0_l = beta_median_cdf(5, lambda);
    const double g1_l = beta_median_cdf(5, std::min(lambda * ec, 1.0));
    const double num = pi0 + pi1 * (1.0 - g1_l) / (1.0 - g0_l);
    return num / (pi0 + pi1 * ec * ec * ec);
}

LipReport alpha_inf_exponential_report(double C, double lambda, double pi0) {
    LipReport rep;
    rep.lambda = lambda;
    rep.pi0 = pi0;
    rep.k = 5;
    rep.analytic = true;
    rep.alpha_inf_fdr = alpha_inf_exponential(C, lambda, pi0, Procedure::fdr);
    rep.alpha_inf_fdrl = alpha_inf_exponential(C, lambda, pi0, Procedure::fdrl_k5);
    rep.fdr_levels[0] = rep.fdr_levels[1] = rep.alpha_inf_fdr;
    rep.fdrl_levels[0] = rep.fdrl_levels[1] = rep.alpha_inf_fdrl;
    rep.endurance_fdr = 1.0 - rep.alpha_inf_fdr;
    rep.endurance_fdrl = 1.0 - rep.alpha_inf_fdrl;
    return rep;
}

LipReport alpha_inf_numeric(const DistModel& model, double lambda, double pi0, int k,
                            const GridSpec& grid) {
    check_args(lambda, pi0);
    if (k < 1 || k % 2 == 0) throw invalid_spec_error("alpha_inf_numeric: k must be odd");
    if (grid.points < 1000) throw invalid_spec_error("alpha_inf_numeric: need >= 1000 points");
    if (!(grid.t_min > 0.0 && grid.t_min < 1.0))
        throw invalid_spec_error("alpha_inf_numeric: t_min outside (0,1)");

    // Geometric grid from t_min to 1; the infimum often sits at t -> 0+.
    // The coarse level stops at sqrt(t_min); the fine level extends the same
    // grid down to t_min, so its point set is a strict superset and the
    // infimum cannot increase. A fine value well below the coarse one flags
    // an infimum still running toward 0 at the cap.
    const double span = std::log(1.0 / grid.t_min);
    const double coarse_cap = std::sqrt(grid.t_min);
    const int n = grid.points;
    auto t_at = [&](int i) { return grid.t_min * std::exp(span * double(i) / double(n)); };

    LipReport rep;
    rep.lambda = lambda;
    rep.pi0 = pi0;
    rep.k = k;

    double inf_fdr = limit_fdr(model, lambda, pi0, 1.0);
    double inf_fdrl = limit_fdrl(model, lambda, pi0, k, 1.0);
    double deep_fdr = inf_fdr, deep_fdrl = inf_fdrl;
    for (int i = 0; i <= n; ++i) {
        const double t = std::min(t_at(i), 1.0);
        const double f = limit_fdr(model, lambda, pi0, t);
        const double fl = limit_fdrl(model, lambda, pi0, k, t);
        if (t >= coarse_cap) {
            inf_fdr = std::min(inf_fdr, f);
            inf_fdrl = std::min(inf_fdrl, fl);
        }
        deep_fdr = std::min(deep_fdr, f);
        deep_fdrl = std::min(deep_fdrl, fl);
    }
    rep.fdr_levels[0] = inf_fdr;
    rep.fdrl_levels[0] = inf_fdrl;
    rep.fdr_levels[1] = deep_fdr;
    rep.fdrl_levels[1] = deep_fdrl;
    rep.alpha_inf_fdr = deep_fdr;
    rep.alpha_inf_fdrl = deep_fdrl;
    rep.endurance_fdr = 1.0 - deep_fdr;
    rep.endurance_fdrl = 1.0 - deep_fdrl;
    return rep;
}

std::pair<double, double> endurance(const LipReport& report) {
    return {1.0 - report.alpha_inf_fdr, 1.0 - report.alpha_inf_fdrl};
}

}  // namespace fdrl
