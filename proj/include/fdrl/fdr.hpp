#pragma once

// Plug-in FDR estimators, data-driven thresholds and rejection masks.
//
// The conventional estimator is
//   FDR(t) = W(lambda) t / ((R(t) v 1)(1 - lambda)),
// the locally aggregated one replaces t and lambda by G*(t) and G*(lambda).
// Both numerator and denominator are step functions with knots at observed
// values, so the threshold sup{t : estimate <= alpha} is searched over the
// sorted unique observed values plus the endpoint 1.

#include <cstddef>
#include <vector>

#include "fdrl/lattice.hpp"
#include "fdrl/null_dist.hpp"

namespace fdrl {

struct FdrCurve {
    std::vector<double> thresholds;  // candidates: sorted unique values + {1}
    std::vector<double> estimates;
    double alpha = 0.0;
    double lambda = 0.0;
    double t_alpha = 0.0;       // largest candidate with estimate <= alpha, else 0
    std::size_t rejections = 0;  // R(t_alpha)
};

// Point evaluations of the estimators.
double fdr_hat(const Lattice& p, double lambda, double t);
double fdrl_hat(const Lattice& pstar, double lambda, double t, const NullCdf& gstar);

// Full curve over the candidate set with the chosen threshold. fdr_curve is
// fdrl_curve under the uniform null, computed through the same code path.
FdrCurve fdr_curve(const Lattice& p, double lambda, double alpha);
FdrCurve fdrl_curve(const Lattice& pstar, double lambda, double alpha, const NullCdf& gstar);

// reject H0(v) iff field(v) <= t_alpha
RejectionMask reject(const Lattice& field, double t_alpha);

}  // namespace fdrl
