#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flp/distribution.hpp"
#include "flp/projection.hpp"

namespace flp {

/// Monte Carlo estimate of the Bayesian approximation ratio
/// E[SC_v] / E[SC_opt] at a fixed number of agents n.
struct RatioEstimate {
    double mean_mech_cost = 0;
    double mean_opt_cost = 0;
    double ratio = 0;  // ratio of means, not mean of ratios
    double se_mech = 0;
    double se_opt = 0;
    double se_ratio = 0;  // delta method, covariance included
    int trials = 0;
    int n = 0;
    std::uint64_t seed = 0;
};

struct ConvergencePoint {
    int n = 0;
    double ratio = 0;
    double deviation = 0;  // |ratio - limit|
    double se_ratio = 0;
};

struct ConvergenceReport {
    std::vector<ConvergencePoint> points;
    double limit = 0;       // limit_ratio(mu, v, k)
    double slope = 0;       // log-log least squares fit of deviation vs n
    double intercept = 0;
    bool slope_defined = false;  // false for degenerate schedules
};

struct RobustnessReport {
    double w_inf = 0;             // W_inf(mu, mu_tilde)
    double w1 = 0;                // W1(mu, mu_tilde)
    double projection_cost = 0;   // W1(mu, nu^(k))
    double bound = 0;             // (w_inf + 2*w1) / projection_cost
    double measured = 0;          // |limit_ratio(mu, v_{mu_tilde}) - 1|
    double mc_ratio = 0;          // Monte Carlo ratio at the given n
    std::vector<double> v_tilde;  // optimal vector of mu_tilde
    bool truncated = false;       // inputs were truncated to compact support
};

/// Estimates E[SC_v]/E[SC_opt] with `trials` profiles of size n. Mechanism
/// and optimal costs are evaluated on the same profile per trial (common
/// random numbers). Trial t uses the stream derive_stream(seed, t), so the
/// result is independent of the thread count. Requires n > k.
RatioEstimate estimate_bar(const Distribution& mu, std::span<const double> v,
                           int k, int n, int trials, std::uint64_t seed,
                           int threads = 0);

/// Runs estimate_bar over an increasing n-schedule and fits the log-log
/// slope of |ratio - limit| against n.
ConvergenceReport convergence_study(const Distribution& mu,
                                    std::span<const double> v, int k,
                                    std::span<const int> n_schedule, int trials,
                                    std::uint64_t seed,
                                    const SolverConfig& cfg = {});

/// Measures the optimality loss from computing the percentile vector on an
/// approximation mu_tilde of mu, against the transport bound
/// (W_inf + 2 W1)/W1(mu, nu^(k)). Laws with unbounded support are
/// truncated at quantiles 1e-6 and 1-1e-6 and the report flags it.
RobustnessReport robustness_study(DistPtr mu, DistPtr mu_tilde, int k, int n,
                                  int trials, std::uint64_t seed,
                                  const SolverConfig& cfg = {});

}  // namespace flp
