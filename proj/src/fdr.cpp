#include "fdrl/fdr.hpp"

#include <algorithm>
#include <cmath>

namespace fdrl {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw invalid_spec_error("fdr estimator: lambda must lie in (0,1)");
}

// shared estimator core so the k = 1 / uniform-null case is bit-identical
// between the two procedures
double estimate_at(double w_lambda, double g_t, std::size_t r_t, double g_lambda) {
    const double r = static_cast<double>(r_t == 0 ? 1 : r_t);  // R(t) v 1
    return w_lambda * g_t / (r * (1.0 - g_lambda));
}

double g_lambda_checked(const NullCdf& gstar, double lambda) {
    const double g = gstar(lambda);
    if (g >= 1.0)
        throw degenerate_null_error("fdr estimator: G*(lambda) = 1, estimate undefined");
    return g;
}

}  // namespace

double fdrl_hat(const Lattice& pstar, double lambda, double t, const NullCdf& gstar) {
    check_lambda(lambda);
    validate_unit_range(pstar, "fdrl_hat");
    if (!(t >= 0.0 && t <= 1.0)) throw invalid_spec_error("fdrl_hat: t outside [0,1]");
    std::size_t w = 0, r = 0;
    for (double v : pstar.values) {
        w += (v > lambda);
        r += (v <= t);
    }
    return estimate_at(static_cast<double>(w), gstar(t), r, g_lambda_checked(gstar, lambda));
}

double fdr_hat(const Lattice& p, double lambda, double t) {
    return fdrl_hat(p, lambda, t, NullCdf::uniform());
}

FdrCurve fdrl_curve(const Lattice& pstar, double lambda, double alpha, const NullCdf& gstar) {
    check_lambda(lambda);
    validate_unit_range(pstar, "fdrl_curve");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw invalid_spec_error("fdrl_curve: alpha outside [0,1]");

    const std::size_t n = pstar.size();
    std::vector<double> sorted(pstar.values);
    std::sort(sorted.begin(), sorted.end());

    FdrCurve curve;
    curve.alpha = alpha;
    curve.lambda = lambda;
    curve.thresholds = sorted;
    curve.thresholds.erase(std::unique(curve.thresholds.begin(), curve.thresholds.end()),
                           curve.thresholds.end());
    if (curve.thresholds.empty() || curve.thresholds.back() != 1.0)
        curve.thresholds.push_back(1.0);

    const double g_lambda = g_lambda_checked(gstar, lambda);
    std::size_t w = n - static_cast<std::size_t>(
                            std::upper_bound(sorted.begin(), sorted.end(), lambda) -
                            sorted.begin());  // W(lambda) = #{p* > lambda}

    curve.estimates.resize(curve.thresholds.size());
    curve.t_alpha = 0.0;
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        const double t = curve.thresholds[i];
        const auto r = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        curve.estimates[i] = estimate_at(static_cast<double>(w), gstar(t), r, g_lambda);
        if (curve.estimates[i] <= alpha) curve.t_alpha = t;  // candidates are increasing
    }
    curve.rejections = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), curve.t_alpha) - sorted.begin());
    return curve;
}

FdrCurve fdr_curve(const Lattice& p, double lambda, double alpha) {
    return fdrl_curve(p, lambda, alpha, NullCdf::uniform());
}

RejectionMask reject(const Lattice& field, double t_alpha) {
    RejectionMask mask(field.dims);
    for (std::size_t v = 0; v < field.size(); ++v)
        mask.values[v] = (field.values[v] <= t_alpha) ? 1 : 0;
    return mask;
}

}  // namespace fdrl
