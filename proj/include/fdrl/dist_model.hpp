#pragma once

// Null/alternative distribution pairs for one-sided tests of mu = 0 vs
// mu > 0, used by the p-value transform and the identification analysis.
//
//   exponential_shift(C): f0(x) = exp(-(x+1)) on x > -1, f1 shifts it by C
//   normal(C, sigma):     F0 = N(0,1), F1 = N(C, sigma^2)
//   student_t(C, d0, d1): F0 = t_{d0}, F1 = C + t_{d1}

#include "fdrl/errors.hpp"

namespace fdrl {

struct DistModel {
    enum class Family { exponential_shift, normal, student_t };

    Family family = Family::normal;
    double C = 1.0;
    double sigma = 1.0;  // normal only
    double d0 = 1.0, d1 = 1.0;  // student_t only

    static DistModel exponential_shift(double C);
    static DistModel normal(double C, double sigma);
    static DistModel student_t(double C, double d0, double d1);

    double null_cdf(double x) const;         // F0
    double alt_cdf(double x) const;          // F1
    double null_density(double x) const;     // f0
    double alt_density(double x) const;      // f1
    double null_upper_tail(double x) const;  // 1 - F0, tail-accurate
    double alt_upper_tail(double x) const;   // 1 - F1
    double null_upper_quantile(double t) const;  // x with 1 - F0(x) = t

    // G1(t) = 1 - F1(F0^{-1}(1-t)): CDF of a p-value under the alternative
    double signal_p_cdf(double t) const;
};

}  // namespace fdrl
