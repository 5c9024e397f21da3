#pragma once

#include <cstddef>
#include <vector>

namespace flp {

/// A probability measure supported on finitely many points of the line.
/// Construction canonicalizes: points are sorted, coincident points are
/// merged with their weights added, weights must be nonnegative and sum
/// to 1 within 1e-12.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<double> points, std::vector<double> weights);

    /// Uniform weights over the given support.
    static DiscreteMeasure uniform_on(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

}  // namespace flp
