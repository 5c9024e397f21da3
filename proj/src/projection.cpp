#include "flp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flp/rng.hpp"
#include "flp/transport.hpp"

namespace flp {

namespace {

double cdf_at(const Distribution& mu, double t) {
    if (std::isinf(t)) return t < 0 ? 0.0 : 1.0;
    return mu.cdf(t);
}

ProjectionResult run_from(const Distribution& mu, std::vector<double> y,
                          const SolverConfig& cfg) {
    ProjectionResult res;
    double cost = w1_continuous_fixed_support(mu, y);
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        std::vector<double> next = lloyd_step(mu, y);
        double next_cost = w1_continuous_fixed_support(mu, next);
        // The median step cannot increase the objective; anything beyond
        // quadrature noise (scale-relative) indicates a broken distribution.
        if (next_cost > cost + 1e-9 * std::max(1.0, cost)) {
            throw std::logic_error("lloyd_step increased the objective");
        }
        double move = 0;
        for (std::size_t j = 0; j < y.size(); ++j) {
            move = std::max(move, std::abs(next[j] - y[j]));
        }
        y = std::move(next);
        cost = next_cost;
        if (move < cfg.tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.y = std::move(y);
    res.cost = cost;
    res.iterations = it;
    auto residuals = system_residuals(mu, res.y);
    res.residual = *std::max_element(residuals.begin(), residuals.end());
    res.v.reserve(res.y.size());
    for (double yj : res.y) res.v.push_back(mu.cdf(yj));
    res.weights = nu_q_measure(mu, res.v).weights();
    return res;
}

std::vector<double> odd_quantile_init(const Distribution& mu, int k) {
    std::vector<double> y(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        y[static_cast<std::size_t>(j - 1)] =
            mu.quantile((2.0 * j - 1.0) / (2.0 * k));
    }
    return y;
}

}  // namespace

std::vector<double> lloyd_step(const Distribution& mu,
                               std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("lloyd_step: empty support");
    if (!std::is_sorted(y.begin(), y.end()) ||
        std::adjacent_find(y.begin(), y.end()) != y.end()) {
        throw std::invalid_argument("lloyd_step: support must be strictly increasing");
    }
    std::size_t k = y.size();
    std::vector<double> next(k);
    double z_prev = mu.support_lo();
    for (std::size_t j = 0; j < k; ++j) {
        double z_next = j + 1 < k ? 0.5 * (y[j] + y[j + 1]) : mu.support_hi();
        double mass = cdf_at(mu, z_next) - cdf_at(mu, z_prev);
        if (!(mass > 0)) {
            throw DegenerateCellError("lloyd_step: cell carries no mass");
        }
        next[j] = mu.conditional_median(z_prev, z_next);
        z_prev = z_next;
    }
    return next;
}

std::vector<double> system_residuals(const Distribution& mu,
                                     std::span<const double> y) {
    std::size_t k = y.size();
    std::vector<double> res(k);
    double f_prev = 0.0;  // F(z_0) with z_0 the left support endpoint
    for (std::size_t j = 0; j < k; ++j) {
        double f_next =
            j + 1 < k ? cdf_at(mu, 0.5 * (y[j] + y[j + 1])) : 1.0;
        // Median condition on cell j: 2(F(y_j) - F(z_{j-1})) = F(z_j) - F(z_{j-1}).
        res[j] = std::abs(2.0 * (mu.cdf(y[j]) - f_prev) - (f_next - f_prev));
        f_prev = f_next;
    }
    return res;
}

ProjectionResult solve_projection(const Distribution& mu, int k,
                                  const SolverConfig& cfg) {
    if (k < 1) throw std::invalid_argument("solve_projection: k >= 1 required");
    if (!(cfg.tol > 0)) throw std::invalid_argument("solve_projection: tol > 0 required");

    std::vector<double> base = odd_quantile_init(mu, k);
    ProjectionResult best;
    bool have_best = false, have_converged = false;
    auto offer = [&](const ProjectionResult& r) {
        bool better = !have_best || r.cost < best.cost ||
                      (r.converged && !best.converged);
        if (have_converged && !r.converged) better = false;
        if (better) {
            best = r;
            have_best = true;
            have_converged = have_converged || r.converged;
        }
    };

    SplitMix64 jitter(derive_stream(cfg.seed, 0x6c6c6f7964ULL));
    for (int attempt = 0; attempt <= cfg.restarts; ++attempt) {
        std::vector<double> y0 = base;
        if (attempt > 0) {
            // Jitter each point by up to 20% of the gap to its neighbours.
            for (std::size_t j = 0; j < y0.size(); ++j) {
                double lo_gap = j > 0 ? base[j] - base[j - 1]
                                      : base[std::min<std::size_t>(1, y0.size() - 1)] - base[0];
                double hi_gap = j + 1 < y0.size() ? base[j + 1] - base[j] : lo_gap;
                double u = 2.0 * jitter.next_unit() - 1.0;
                y0[j] = base[j] + 0.2 * u * (u < 0 ? lo_gap : hi_gap);
            }
            std::sort(y0.begin(), y0.end());
            if (std::adjacent_find(y0.begin(), y0.end()) != y0.end()) continue;
        }
        try {
            offer(run_from(mu, std::move(y0), cfg));
        } catch (const DegenerateCellError&) {
            continue;
        }
    }

    if (!have_best) {
        throw ConvergenceFailure(ProjectionResult{});
    }
    if (!best.converged) {
        throw ConvergenceFailure(std::move(best));
    }
    return best;
}

std::vector<double> optimal_vector(const Distribution& mu, int k,
                                   const SolverConfig& cfg) {
    return solve_projection(mu, k, cfg).v;
}

double limit_ratio_with_cost(const Distribution& mu, std::span<const double> v,
                             double projection_cost) {
    std::vector<double> quantiles(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] > 0.0 && v[j] < 1.0)) {
            throw std::invalid_argument("limit_ratio: v entries must lie in (0,1)");
        }
        quantiles[j] = mu.quantile(v[j]);
    }
    std::sort(quantiles.begin(), quantiles.end());
    return w1_continuous_fixed_support(mu, quantiles) / projection_cost;
}

double limit_ratio(const Distribution& mu, std::span<const double> v, int k,
                   const SolverConfig& cfg) {
    return limit_ratio_with_cost(mu, v, solve_projection(mu, k, cfg).cost);
}

}  // namespace flp
