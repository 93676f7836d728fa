#pragma once

// Small numeric kernels shared across modules: standard normal CDF and tails,
// the regularized incomplete beta function, and monotone CDF inversion.

namespace fdrl {

// x^n by repeated multiplication, exact for n = 0 and n = 1.
inline double powi(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double norm_cdf(double z);        // Phi(z)
double norm_upper_tail(double z); // 1 - Phi(z), accurate in the far right tail
double norm_upper_quantile(double p);  // z with norm_upper_tail(z) = p

// Regularized incomplete beta I_x(a, b) via continued fraction.
double inc_beta_reg(double a, double b, double x);

// Student-t distribution with (real) dof nu.
double student_t_cdf(double x, double nu);
double student_t_upper_tail(double x, double nu);
double student_t_density(double x, double nu);
double student_t_upper_quantile(double p, double nu);

}  // namespace fdrl
