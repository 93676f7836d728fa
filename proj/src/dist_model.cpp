#include "fdrl/dist_model.hpp"

#include <algorithm>
#include <cmath>

#include "fdrl/special.hpp"

namespace fdrl {

DistModel DistModel::exponential_shift(double C) {
    if (!(C > 0.0)) throw invalid_spec_error("exponential_shift: C must be > 0");
    DistModel m;
    m.family = Family::exponential_shift;
    m.C = C;
    return m;
}

DistModel DistModel::normal(double C, double sigma) {
    if (!(C > 0.0)) throw invalid_spec_error("normal: C must be > 0");
    if (!(sigma > 0.0)) throw invalid_spec_error("normal: sigma must be > 0");
    DistModel m;
    m.family = Family::normal;
    m.C = C;
    m.sigma = sigma;
    return m;
}

DistModel DistModel::student_t(double C, double d0, double d1) {
    if (!(C > 0.0)) throw invalid_spec_error("student_t: C must be > 0");
    if (!(d0 >= 1.0 && d1 >= 1.0)) throw invalid_spec_error("student_t: dof must be >= 1");
    DistModel m;
    m.family = Family::student_t;
    m.C = C;
    m.d0 = d0;
    m.d1 = d1;
    return m;
}

double DistModel::null_upper_tail(double x) const {
    switch (family) {
        case Family::exponential_shift:
            return x <= -1.0 ? 1.0 : std::exp(-(x + 1.0));
        case Family::normal:
            return fdrl::norm_upper_tail(x);
        case Family::student_t:
            return student_t_upper_tail(x, d0);
    }
    return 0.0;
}

double DistModel::alt_upper_tail(double x) const {
    switch (family) {
        case Family::exponential_shift:
            return x <= C - 1.0 ? 1.0 : std::exp(-(x + 1.0 - C));
        case Family::normal:
            return fdrl::norm_upper_tail((x - C) / sigma);
        case Family::student_t:
            return student_t_upper_tail(x - C, d1);
    }
    return 0.0;
}

double DistModel::null_cdf(double x) const { return 1.0 - null_upper_tail(x); }
double DistModel::alt_cdf(double x) const { return 1.0 - alt_upper_tail(x); }

double DistModel::null_density(double x) const {
    switch (family) {
        case Family::exponential_shift:
            return x + 1.0 > 0.0 ? std::exp(-(x + 1.0)) : 0.0;
        case Family::normal:
            return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
        case Family::student_t:
            return student_t_density(x, d0);
    }
    return 0.0;
}

double DistModel::alt_density(double x) const {
    switch (family) {
        case Family::exponential_shift:
            return x + 1.0 > C ? std::exp(-(x + 1.0 - C)) : 0.0;
        case Family::normal: {
            double z = (x - C) / sigma;
            return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::acos(-1.0)));
        }
        case Family::student_t:
            return student_t_density(x - C, d1);
    }
    return 0.0;
}

double DistModel::null_upper_quantile(double t) const {
    if (!(t > 0.0 && t < 1.0))
        throw invalid_spec_error("null_upper_quantile: t outside (0,1)");
    switch (family) {
        case Family::exponential_shift:
            return -1.0 - std::log(t);
        case Family::normal:
            return norm_upper_quantile(t);
        case Family::student_t:
            return student_t_upper_quantile(t, d0);
    }
    return 0.0;
}

double DistModel::signal_p_cdf(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return std::clamp(alt_upper_tail(null_upper_quantile(t)), 0.0, 1.0);
}

}  // namespace fdrl
