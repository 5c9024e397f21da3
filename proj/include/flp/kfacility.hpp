#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace flp {

/// Agent positions in nondecreasing order.
class SampleProfile {
public:
    explicit SampleProfile(std::vector<double> positions);

    /// Sorts the raw reports first (percentile mechanisms are anonymous).
    static SampleProfile from_raw(std::vector<double> raw);

    const std::vector<double>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }

private:
    std::vector<double> positions_;
};

/// k percentile values, nondecreasing, in [0,1].
class PercentileVector {
public:
    explicit PercentileVector(std::vector<double> v);

    const std::vector<double>& values() const { return v_; }
    std::size_t size() const { return v_.size(); }

private:
    std::vector<double> v_;
};

struct Placement {
    std::vector<double> facilities;  // sorted
    // Index of the nearest facility per agent; equidistant agents are
    // assigned to the left facility.
    std::optional<std::vector<std::size_t>> assignment;
};

/// Average distance to the nearest facility: (1/n) sum_i min_j |x_i - y_j|.
double social_cost(const SampleProfile& x, const Placement& y);

/// Places facility j at the agent of 1-based sorted rank
/// floor((n-1) v_j) + 1.
Placement percentile_mechanism(const SampleProfile& x,
                               const PercentileVector& v);

/// Exact minimizer of the social cost over all k-point placements, with
/// cost. Clusters of an optimal solution are contiguous in sorted order
/// and each is served by its (lower) median, so an interval DP applies;
/// the per-layer minimization is done divide-and-conquer, using the
/// monotonicity of the argmin of the L1 interval cost.
/// Ties break to the leftmost median / smallest cluster boundaries.
/// Requires 1 <= k <= n.
std::pair<Placement, double> optimal_facilities(const SampleProfile& x, int k);

/// Largest cost reduction agent i can obtain by misreporting onto the
/// grid; <= 0 (up to rounding) for a truthful mechanism.
double best_response_gain(const SampleProfile& x, const PercentileVector& v,
                          std::size_t agent, std::span<const double> grid);

}  // namespace flp
