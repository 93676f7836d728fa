#include "fdrl/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdrl {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double norm_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double norm_upper_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_upper_quantile: p outside (0,1)");
    // bisection on the upper tail; erfc stays accurate far into the tail
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (norm_upper_tail(mid) > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * (1.0 + std::fabs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double inc_beta_reg(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("inc_beta_reg: a,b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     beta_cf(b, a, 1.0 - x) / b;
}

double student_t_upper_tail(double x, double nu) {
    if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
    double w = nu / (nu + x * x);
    double half = 0.5 * inc_beta_reg(0.5 * nu, 0.5, w);
    return x >= 0.0 ? half : 1.0 - half;
}

double student_t_cdf(double x, double nu) { return 1.0 - student_t_upper_tail(x, nu); }

double student_t_density(double x, double nu) {
    double lc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                0.5 * std::log(nu * std::acos(-1.0));
    return std::exp(lc - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_upper_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("student_t_upper_quantile: p outside (0,1)");
    // bracket the root, then bisect; heavy tails need a wide bracket
    double lo = -1.0, hi = 1.0;
    while (student_t_upper_tail(hi, nu) > p) {
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    while (student_t_upper_tail(lo, nu) < p) {
        lo *= 2.0;
        if (lo < -1e300) return -std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 400; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_upper_tail(mid, nu) > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + std::fabs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace fdrl
