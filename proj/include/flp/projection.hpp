#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "flp/discrete_measure.hpp"
#include "flp/distribution.hpp"

namespace flp {

struct SolverConfig {
    double tol = 1e-10;      // max facility movement per sweep
    int max_iter = 10000;
    int restarts = 8;        // additional jittered runs
    std::uint64_t seed = 0;  // jitter stream
};

struct ProjectionResult {
    std::vector<double> y;        // facilities, strictly increasing
    std::vector<double> v;        // cdf values F(y_j)
    std::vector<double> weights;  // cell masses
    double cost = 0;              // W1(mu, nu^(k))
    double residual = 0;          // max residual of the median-condition system
    int iterations = 0;
    bool converged = false;
};

/// A Lloyd cell lost all its mass; callers restart from a jittered init.
struct DegenerateCellError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No restart converged. Carries the best iterate found.
struct ConvergenceFailure : std::runtime_error {
    ProjectionResult best;
    explicit ConvergenceFailure(ProjectionResult b)
        : std::runtime_error("projection solver did not converge"),
          best(std::move(b)) {}
};

/// One fixed-point sweep: moves each facility to the conditional median of
/// its cell (cells bounded by midpoints of consecutive facilities and the
/// support endpoints). The projection objective never increases.
std::vector<double> lloyd_step(const Distribution& mu,
                               std::span<const double> y);

/// Solves min over k-point measures of W1(mu, .): iterates lloyd_step from
/// the odd-quantile init y_j = quantile((2j-1)/(2k)), plus jittered
/// restarts, and keeps the lowest-cost converged run.
ProjectionResult solve_projection(const Distribution& mu, int k,
                                  const SolverConfig& cfg = {});

/// The percentile vector v_j = F(y_j) of the projection support: the
/// asymptotically optimal percentile vector for mu.
std::vector<double> optimal_vector(const Distribution& mu, int k,
                                   const SolverConfig& cfg = {});

/// Limit of the Bayesian approximation ratio of PM_v:
/// W1(mu, nu_{Q_v}) / W1(mu, nu^(k)). v entries must lie in (0,1).
double limit_ratio(const Distribution& mu, std::span<const double> v, int k,
                   const SolverConfig& cfg = {});

/// Same, with the projection cost W1(mu, nu^(k)) already known.
double limit_ratio_with_cost(const Distribution& mu, std::span<const double> v,
                             double projection_cost);

/// Residuals of the k median-condition equations at y (max norm is the
/// convergence certificate reported in ProjectionResult).
std::vector<double> system_residuals(const Distribution& mu,
                                     std::span<const double> y);

}  // namespace flp
