#include "flp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flp {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm, double whole,
                     double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_rule(a, fa, m, fm, flm);
    double right = simpson_rule(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

// Mass of v clamped into [lo, hi].
double clamp_prob(double q, double lo, double hi) {
    return std::clamp(q, lo, hi);
}

constexpr double kEps = Distribution::kTailEps;

// Integral over q in [qa, qb] of |quantile(q) - y|, split at F(y) where the
// integrand has its kink. This is the monotone-coupling cost of sending the
// mass slice (qa, qb) of mu onto the atom at y.
double cell_cost(const Distribution& mu, double qa, double qb, double y) {
    qa = clamp_prob(qa, kEps, 1.0 - kEps);
    qb = clamp_prob(qb, kEps, 1.0 - kEps);
    if (!(qb > qa)) return 0.0;
    auto g = [&](double q) { return std::abs(mu.quantile(q) - y); };
    double qy = clamp_prob(mu.cdf(y), qa, qb);
    double total = 0.0;
    // Below qy the quantile sits left of y and above it right, so each
    // piece reduces to y-weighted mass minus/plus the quantile integral
    // when the law provides it in closed form.
    double exact = mu.quantile_integral(qa, qy);
    if (!std::isnan(exact)) {
        total += y * (qy - qa) - exact;
        total += mu.quantile_integral(qy, qb) - y * (qb - qy);
        return total;
    }
    for (auto [lo, hi] : {std::pair{qa, qy}, std::pair{qy, qb}}) {
        if (hi > lo) {
            total += adaptive_simpson(g, lo, hi, 0.5e-10);
        }
    }
    return total;
}

std::vector<double> merged_sorted_support(std::span<const double> y) {
    if (y.empty()) {
        throw std::invalid_argument("facility support must be nonempty");
    }
    std::vector<double> out(y.begin(), y.end());
    if (!std::is_sorted(out.begin(), out.end())) {
        throw std::invalid_argument("facility support must be sorted");
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson_rule(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 48);
}

double w1_empirical(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("w1_empirical: equal nonzero sizes required");
    }
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

double mechanism_cost(std::span<const double> x, std::span<const double> y) {
    if (x.empty()) throw std::invalid_argument("mechanism_cost: empty profile");
    std::vector<double> ys = merged_sorted_support(y);
    double sum = 0;
    for (double xi : x) {
        auto it = std::lower_bound(ys.begin(), ys.end(), xi);
        double best = std::numeric_limits<double>::infinity();
        if (it != ys.end()) best = *it - xi;
        if (it != ys.begin()) best = std::min(best, xi - *(it - 1));
        sum += best;
    }
    return sum / static_cast<double>(x.size());
}

double w1_continuous_fixed_support(const Distribution& mu,
                                   std::span<const double> y) {
    std::vector<double> ys = merged_sorted_support(y);
    double cost = 0;
    double q_prev = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        double q_next =
            j + 1 < ys.size() ? mu.cdf(0.5 * (ys[j] + ys[j + 1])) : 1.0;
        cost += cell_cost(mu, q_prev, q_next, ys[j]);
        q_prev = q_next;
    }
    return cost;
}

double w1_continuous_discrete(const Distribution& mu,
                              const DiscreteMeasure& nu) {
    double cost = 0;
    double cum = 0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        double next = j + 1 < nu.size() ? cum + nu.weights()[j] : 1.0;
        cost += cell_cost(mu, cum, next, nu.points()[j]);
        cum = next;
    }
    return cost;
}

double w1_continuous(const Distribution& a, const Distribution& b) {
    auto g = [&](double q) { return std::abs(a.quantile(q) - b.quantile(q)); };
    // Pre-split into panels so sign-change kinks are localized.
    constexpr int panels = 16;
    double lo = kEps, hi = 1.0 - kEps;
    double total = 0;
    for (int i = 0; i < panels; ++i) {
        double qa = lo + (hi - lo) * i / panels;
        double qb = lo + (hi - lo) * (i + 1) / panels;
        total += adaptive_simpson(g, qa, qb, 1e-11);
    }
    return total;
}

double w_infinity(const Distribution& a, const Distribution& b) {
    auto g = [&](double q) { return std::abs(a.quantile(q) - b.quantile(q)); };
    constexpr int grid_n = 4096;
    double lo = kEps, hi = 1.0 - kEps;
    double best = 0, best_q = 0.5;
    auto consider = [&](double q) {
        double val = g(q);
        if (val > best) {
            best = val;
            best_q = q;
        }
    };
    for (int i = 0; i < grid_n; ++i) {
        consider(lo + (hi - lo) * (i + 0.5) / grid_n);
    }
    // Endpoint refinement: quantile differences can peak in the tails.
    for (double q = kEps; q < 1e-3; q *= 10.0) {
        consider(q);
        consider(1.0 - q);
    }
    // Golden-section polish around the grid maximizer.
    double span = (hi - lo) / grid_n;
    double xl = std::max(lo, best_q - span), xr = std::min(hi, best_q + span);
    constexpr double phi = 0.6180339887498949;
    double c = xr - phi * (xr - xl), d = xl + phi * (xr - xl);
    double fc = g(c), fd = g(d);
    for (int it = 0; it < 64; ++it) {
        if (fc < fd) {
            xl = c;
            c = d;
            fc = fd;
            d = xl + phi * (xr - xl);
            fd = g(d);
        } else {
            xr = d;
            d = c;
            fd = fc;
            c = xr - phi * (xr - xl);
            fc = g(c);
        }
    }
    return std::max(best, std::max(fc, fd));
}

DiscreteMeasure nu_q_measure(const Distribution& mu,
                             std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("nu_q_measure: empty vector");
    for (double q : v) {
        if (!(q > 0.0 && q < 1.0)) {
            throw std::invalid_argument(
                "nu_q_measure: percentile entries must lie strictly in (0,1)");
        }
    }
    if (!std::is_sorted(v.begin(), v.end())) {
        throw std::invalid_argument("nu_q_measure: percentiles must be sorted");
    }
    std::vector<double> points(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) points[j] = mu.quantile(v[j]);
    std::vector<double> weights(v.size());
    double q_prev = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        double q_next = j + 1 < points.size()
                            ? mu.cdf(0.5 * (points[j] + points[j + 1]))
                            : 1.0;
        weights[j] = q_next - q_prev;
        q_prev = q_next;
    }
    return DiscreteMeasure(std::move(points), std::move(weights));
}

}  // namespace flp
