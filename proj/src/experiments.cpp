#include "flp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "flp/kfacility.hpp"
#include "flp/rng.hpp"
#include "flp/transport.hpp"

namespace flp {

namespace {

struct TrialCosts {
    std::vector<double> mech;
    std::vector<double> opt;
};

TrialCosts run_trials(const Distribution& mu, const PercentileVector& v, int k,
                      int n, int trials, std::uint64_t seed, int threads) {
    TrialCosts costs;
    costs.mech.resize(static_cast<std::size_t>(trials));
    costs.opt.resize(static_cast<std::size_t>(trials));

    auto worker = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            // Common random numbers: mechanism and optimum share the profile.
            SampleProfile x(mu.sample(static_cast<std::size_t>(n),
                                      derive_stream(seed, static_cast<std::uint64_t>(t))));
            costs.mech[static_cast<std::size_t>(t)] =
                social_cost(x, percentile_mechanism(x, v));
            costs.opt[static_cast<std::size_t>(t)] = optimal_facilities(x, k).second;
        }
    };

    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, trials);
    if (threads <= 1) {
        worker(0, trials);
    } else {
        // Each trial owns its seed stream, so the partition does not affect
        // the results; aggregation below runs in trial order regardless.
        std::vector<std::thread> pool;
        int chunk = (trials + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            int begin = i * chunk, end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return costs;
}

}  // namespace

RatioEstimate estimate_bar(const Distribution& mu, std::span<const double> v,
                           int k, int n, int trials, std::uint64_t seed,
                           int threads) {
    if (n <= k) {
        throw std::invalid_argument("estimate_bar: n > k required");
    }
    if (trials < 1) {
        throw std::invalid_argument("estimate_bar: trials >= 1 required");
    }
    PercentileVector pv(std::vector<double>(v.begin(), v.end()));
    if (static_cast<int>(pv.size()) != k) {
        throw std::invalid_argument("estimate_bar: |v| must equal k");
    }
    TrialCosts costs = run_trials(mu, pv, k, n, trials, seed, threads);

    double t = static_cast<double>(trials);
    double mean_m = 0, mean_o = 0;
    for (int i = 0; i < trials; ++i) {
        mean_m += costs.mech[static_cast<std::size_t>(i)];
        mean_o += costs.opt[static_cast<std::size_t>(i)];
    }
    mean_m /= t;
    mean_o /= t;
    double var_m = 0, var_o = 0, cov = 0;
    for (int i = 0; i < trials; ++i) {
        double dm = costs.mech[static_cast<std::size_t>(i)] - mean_m;
        double dd = costs.opt[static_cast<std::size_t>(i)] - mean_o;
        var_m += dm * dm;
        var_o += dd * dd;
        cov += dm * dd;
    }
    double denom = trials > 1 ? t - 1 : 1;
    var_m /= denom;
    var_o /= denom;
    cov /= denom;

    RatioEstimate est;
    est.mean_mech_cost = mean_m;
    est.mean_opt_cost = mean_o;
    est.ratio = mean_m / mean_o;
    est.se_mech = std::sqrt(var_m / t);
    est.se_opt = std::sqrt(var_o / t);
    // Delta method for the ratio of means, covariance included.
    double rel = var_m / (mean_m * mean_m) + var_o / (mean_o * mean_o) -
                 2.0 * cov / (mean_m * mean_o);
    est.se_ratio = est.ratio * std::sqrt(std::max(rel, 0.0) / t);
    est.trials = trials;
    est.n = n;
    est.seed = seed;
    return est;
}

ConvergenceReport convergence_study(const Distribution& mu,
                                    std::span<const double> v, int k,
                                    std::span<const int> n_schedule, int trials,
                                    std::uint64_t seed,
                                    const SolverConfig& cfg) {
    if (n_schedule.empty()) {
        throw std::invalid_argument("convergence_study: empty n-schedule");
    }
    if (!std::is_sorted(n_schedule.begin(), n_schedule.end()) ||
        std::adjacent_find(n_schedule.begin(), n_schedule.end()) !=
            n_schedule.end()) {
        throw std::invalid_argument(
            "convergence_study: n-schedule must be strictly increasing");
    }
    ConvergenceReport report;
    report.limit = limit_ratio(mu, v, k, cfg);
    for (int n : n_schedule) {
        RatioEstimate est = estimate_bar(mu, v, k, n, trials, seed);
        report.points.push_back({n, est.ratio,
                                 std::abs(est.ratio - report.limit),
                                 est.se_ratio});
    }
    // Least squares on (log n, log |ratio - limit|); points with zero
    // deviation cannot enter the fit.
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : report.points) {
        if (p.deviation > 0) {
            pts.emplace_back(std::log(static_cast<double>(p.n)),
                             std::log(p.deviation));
        }
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [lx, ly] : pts) {
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        double m = static_cast<double>(pts.size());
        double det = m * sxx - sx * sx;
        if (det > 0) {
            report.slope = (m * sxy - sx * sy) / det;
            report.intercept = (sy * sxx - sx * sxy) / det;
            report.slope_defined = true;
        }
    }
    return report;
}

RobustnessReport robustness_study(DistPtr mu, DistPtr mu_tilde, int k, int n,
                                  int trials, std::uint64_t seed,
                                  const SolverConfig& cfg) {
    if (!mu || !mu_tilde) {
        throw std::invalid_argument("robustness_study: null distribution");
    }
    RobustnessReport report;
    // The transport bound requires compact support; unbounded laws are
    // truncated at the 1e-6 tail quantiles and the report records it.
    constexpr double tail = 1e-6;
    auto compactify = [&](DistPtr d) {
        if (std::isinf(d->support_lo()) || std::isinf(d->support_hi())) {
            report.truncated = true;
            return truncate(d, d->quantile(tail), d->quantile(1.0 - tail));
        }
        return d;
    };
    DistPtr base = compactify(mu);
    DistPtr approx = compactify(mu_tilde);

    report.v_tilde = optimal_vector(*approx, k, cfg);
    ProjectionResult proj = solve_projection(*base, k, cfg);
    report.projection_cost = proj.cost;
    report.measured =
        std::abs(limit_ratio_with_cost(*base, report.v_tilde, proj.cost) - 1.0);
    report.w_inf = w_infinity(*base, *approx);
    report.w1 = w1_continuous(*base, *approx);
    report.bound = (report.w_inf + 2.0 * report.w1) / report.projection_cost;
    report.mc_ratio =
        estimate_bar(*base, report.v_tilde, k, n, trials, seed).ratio;
    return report;
}

}  // namespace flp
