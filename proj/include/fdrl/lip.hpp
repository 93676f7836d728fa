#pragma once

// Lack-of-identification analysis: alpha_inf, the infimum of the limiting
// estimated FDR curve, and the endurance 1 - alpha_inf. When alpha_inf > 0,
// control levels at or below it collapse the threshold to zero and only
// exactly-zero (aggregated) p-values can be rejected.
//
// Limiting curves under a continuous null (G0(t) = t):
//   FDR:   (pi0 + pi1 (1-G1(l))/(1-l))      / (pi0 + pi1 G1(t)/t)
//   FDR_L: (pi0 + pi1 (1-G1*(l))/(1-G0*(l))) / (pi0 + pi1 G1*(t)/G0*(t))
// with G0* the Beta((k+1)/2,(k+1)/2) CDF and G1* = G0* o G1.

#include <utility>

#include "fdrl/dist_model.hpp"

namespace fdrl {

enum class Procedure { fdr, fdrl_k5 };

struct LipReport {
    double alpha_inf_fdr = 0.0;
    double alpha_inf_fdrl = 0.0;
    double endurance_fdr = 1.0;
    double endurance_fdrl = 1.0;
    double lambda = 0.0;
    double pi0 = 0.0;
    int k = 5;
    // infimum at the coarse and fine grid level; exposes non-convergence
    double fdr_levels[2] = {0.0, 0.0};
    double fdrl_levels[2] = {0.0, 0.0};
    bool analytic = false;
};

// Pointwise limiting curves.
double limit_fdr(const DistModel& model, double lambda, double pi0, double t);
double limit_fdrl(const DistModel& model, double lambda, double pi0, int k, double t);

// Closed form for the shifted-exponential model; the aggregated branch is
// derived for the k = 5 cross neighborhood.
double alpha_inf_exponential(double C, double lambda, double pi0, Procedure procedure);

struct GridSpec {
    int points = 10000;     // coarse level; the fine level interleaves midpoints
    double t_min = 1e-8;    // geometric grid lower cap
};

// Numeric infimum over a geometric grid on [t_min, 1], reported at two
// refinement levels (the fine grid is a superset of the coarse one).
LipReport alpha_inf_numeric(const DistModel& model, double lambda, double pi0, int k,
                            const GridSpec& grid = {});

// Analytic report for exponential_shift with k = 5.
LipReport alpha_inf_exponential_report(double C, double lambda, double pi0);

// (1 - alpha_inf_fdr, 1 - alpha_inf_fdrl)
std::pair<double, double> endurance(const LipReport& report);

}  // namespace fdrl
