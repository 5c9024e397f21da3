#pragma once

#include <functional>
#include <span>
#include <vector>

#include "flp/discrete_measure.hpp"
#include "flp/distribution.hpp"

namespace flp {

/// W1 between two empirical measures of equal size n with uniform weights:
/// (1/n) * sum |a_(i) - b_(i)| over sorted order statistics (the monotone
/// coupling is optimal on the line). Inputs must be sorted.
double w1_empirical(std::span<const double> a, std::span<const double> b);

/// Transport cost of the empirical measure of x onto the fixed support y
/// with free weights: (1/n) * sum_i min_j |x_i - y_j|. y must be sorted.
double mechanism_cost(std::span<const double> x, std::span<const double> y);

/// Integral of min_j |x - y_j| against mu: the cost of projecting mu onto
/// the fixed support y with free weights. y must be sorted and nonempty.
double w1_continuous_fixed_support(const Distribution& mu,
                                   std::span<const double> y);

/// W1 between mu and a discrete measure with prescribed weights, via the
/// monotone (quantile) coupling. Always >= the free-weight cost above.
double w1_continuous_discrete(const Distribution& mu,
                              const DiscreteMeasure& nu);

/// W1 between two absolutely continuous laws: integral over q in (0,1)
/// of |quantile_a(q) - quantile_b(q)|.
double w1_continuous(const Distribution& a, const Distribution& b);

/// W-infinity between two laws: sup_q |quantile_a(q) - quantile_b(q)|,
/// evaluated on a 4096-point quantile grid with local refinement.
double w_infinity(const Distribution& a, const Distribution& b);

/// The k-point measure nu_{Q_v} at the v-quantiles of mu, each carrying
/// the mu-mass of its nearest-point cell (cell boundaries are midpoints
/// of consecutive quantiles; outer boundaries are the support endpoints).
/// Entries of v must lie strictly inside (0,1) and be nondecreasing.
DiscreteMeasure nu_q_measure(const Distribution& mu, std::span<const double> v);

/// Adaptive Simpson quadrature with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

}  // namespace flp
