#include "flp/kfacility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flp/transport.hpp"

namespace flp {

namespace {

std::vector<std::size_t> assign_nearest(std::span<const double> x,
                                        std::span<const double> y) {
    std::vector<std::size_t> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto it = std::lower_bound(y.begin(), y.end(), x[i]);
        std::size_t right = static_cast<std::size_t>(it - y.begin());
        std::size_t best;
        if (right == y.size()) {
            best = y.size() - 1;
        } else if (right == 0) {
            best = 0;
        } else {
            double dl = x[i] - y[right - 1];
            double dr = y[right] - x[i];
            // Equidistant agents go to the left facility.
            best = (dl <= dr) ? right - 1 : right;
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

SampleProfile::SampleProfile(std::vector<double> positions)
    : positions_(std::move(positions)) {
    if (positions_.empty()) {
        throw std::invalid_argument("SampleProfile: empty profile");
    }
    if (!std::is_sorted(positions_.begin(), positions_.end())) {
        throw std::invalid_argument("SampleProfile: positions must be sorted");
    }
}

SampleProfile SampleProfile::from_raw(std::vector<double> raw) {
    std::sort(raw.begin(), raw.end());
    return SampleProfile(std::move(raw));
}

PercentileVector::PercentileVector(std::vector<double> v) : v_(std::move(v)) {
    if (v_.empty()) throw std::invalid_argument("PercentileVector: empty");
    if (!std::is_sorted(v_.begin(), v_.end())) {
        throw std::invalid_argument("PercentileVector: entries must be sorted");
    }
    if (v_.front() < 0.0 || v_.back() > 1.0) {
        throw std::invalid_argument("PercentileVector: entries must be in [0,1]");
    }
}

double social_cost(const SampleProfile& x, const Placement& y) {
    return mechanism_cost(x.positions(), y.facilities);
}

Placement percentile_mechanism(const SampleProfile& x,
                               const PercentileVector& v) {
    const auto& pos = x.positions();
    std::size_t n = pos.size();
    Placement out;
    out.facilities.reserve(v.size());
    for (double vj : v.values()) {
        // 1-based rank floor((n-1) v_j) + 1; v_j = 1 maps to rank n.
        std::size_t rank =
            static_cast<std::size_t>(std::floor((n - 1) * vj)) + 1;
        rank = std::min(rank, n);
        out.facilities.push_back(pos[rank - 1]);
    }
    out.assignment = assign_nearest(pos, out.facilities);
    return out;
}

namespace {

// Interval clustering DP. w(i,j) is the L1 cost of serving agents i..j
// (0-based, inclusive) from the lower median of the interval; computed in
// O(1) from the prefix sums S.
class IntervalCost {
public:
    explicit IntervalCost(const std::vector<double>& x) : x_(x), prefix_(x.size() + 1, 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + x[i];
        }
    }

    std::size_t median_index(std::size_t i, std::size_t j) const {
        return i + (j - i) / 2;  // lower median
    }

    double operator()(std::size_t i, std::size_t j) const {
        std::size_t m = median_index(i, j);
        double xm = x_[m];
        double left = xm * static_cast<double>(m - i + 1) - (prefix_[m + 1] - prefix_[i]);
        double right = (prefix_[j + 1] - prefix_[m + 1]) - xm * static_cast<double>(j - m);
        return left + right;
    }

private:
    const std::vector<double>& x_;
    std::vector<double> prefix_;
};

// Fills dp[j] = min over s of prev[s-1] + w(s, j) for j in [lo, hi], with
// the argmin known to lie in [s_lo, s_hi]. The interval cost satisfies the
// concave quadrangle inequality, so the (smallest) argmin is monotone in j
// and divide-and-conquer applies. Ties take the smallest s, which yields
// lexicographically smallest cluster boundaries.
void dc_layer(const IntervalCost& w, const std::vector<double>& prev,
              std::vector<double>& dp, std::vector<std::size_t>& arg,
              std::size_t lo, std::size_t hi, std::size_t s_lo,
              std::size_t s_hi) {
    if (lo > hi) return;
    std::size_t mid = lo + (hi - lo) / 2;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_s = s_lo;
    std::size_t s_cap = std::min(mid, s_hi);
    for (std::size_t s = s_lo; s <= s_cap; ++s) {
        double cand = prev[s - 1] + w(s, mid);
        if (cand < best) {
            best = cand;
            best_s = s;
        }
    }
    dp[mid] = best;
    arg[mid] = best_s;
    if (mid > lo) dc_layer(w, prev, dp, arg, lo, mid - 1, s_lo, best_s);
    if (mid < hi) dc_layer(w, prev, dp, arg, mid + 1, hi, best_s, s_hi);
}

}  // namespace

std::pair<Placement, double> optimal_facilities(const SampleProfile& x, int k) {
    const auto& pos = x.positions();
    std::size_t n = pos.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("optimal_facilities: requires 1 <= k <= n");
    }
    IntervalCost w(pos);

    std::vector<double> dp(n), prev(n);
    // arg[f][j]: start index of the last cluster when agents 0..j are
    // served by f facilities.
    std::vector<std::vector<std::size_t>> arg(static_cast<std::size_t>(k),
                                              std::vector<std::size_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j) prev[j] = w(0, j);
    for (int f = 2; f <= k; ++f) {
        std::size_t fi = static_cast<std::size_t>(f);
        dc_layer(w, prev, dp, arg[fi - 1], fi - 1, n - 1, fi - 1, n - 1);
        std::swap(dp, prev);
    }
    double total = prev[n - 1];

    // Reconstruct cluster boundaries from the last layer backwards.
    std::vector<std::size_t> starts(static_cast<std::size_t>(k));
    std::size_t end = n - 1;
    for (int f = k; f >= 2; --f) {
        starts[static_cast<std::size_t>(f - 1)] = arg[static_cast<std::size_t>(f - 1)][end];
        end = starts[static_cast<std::size_t>(f - 1)] - 1;
    }
    starts[0] = 0;

    Placement placement;
    placement.facilities.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::size_t i = starts[static_cast<std::size_t>(f)];
        std::size_t j = (f + 1 < k) ? starts[static_cast<std::size_t>(f + 1)] - 1 : n - 1;
        placement.facilities.push_back(pos[w.median_index(i, j)]);
    }
    placement.facilities.erase(std::unique(placement.facilities.begin(),
                                           placement.facilities.end()),
                               placement.facilities.end());
    placement.assignment = assign_nearest(pos, placement.facilities);
    return {std::move(placement), total / static_cast<double>(n)};
}

double best_response_gain(const SampleProfile& x, const PercentileVector& v,
                          std::size_t agent, std::span<const double> grid) {
    const auto& pos = x.positions();
    if (agent >= pos.size()) {
        throw std::invalid_argument("best_response_gain: agent index out of range");
    }
    double truth = pos[agent];
    auto agent_cost = [&](const Placement& p) {
        double best = std::numeric_limits<double>::infinity();
        for (double y : p.facilities) best = std::min(best, std::abs(truth - y));
        return best;
    };
    double cost_true = agent_cost(percentile_mechanism(x, v));
    double gain = -std::numeric_limits<double>::infinity();
    std::vector<double> raw = pos;
    for (double misreport : grid) {
        raw[agent] = misreport;
        double cost = agent_cost(percentile_mechanism(SampleProfile::from_raw(raw), v));
        gain = std::max(gain, cost_true - cost);
    }
    return gain;
}

}  // namespace flp
