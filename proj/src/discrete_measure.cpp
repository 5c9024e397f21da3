#include "flp/discrete_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flp {

DiscreteMeasure::DiscreteMeasure(std::vector<double> points,
                                 std::vector<double> weights) {
    if (points.empty() || points.size() != weights.size()) {
        throw std::invalid_argument(
            "DiscreteMeasure: points and weights must be nonempty and match");
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    double total = 0;
    for (std::size_t i : order) {
        double p = points[i], w = weights[i];
        if (!(w >= 0)) {
            throw std::invalid_argument("DiscreteMeasure: negative weight");
        }
        if (!std::isfinite(p)) {
            throw std::invalid_argument("DiscreteMeasure: non-finite point");
        }
        total += w;
        if (!points_.empty() && points_.back() == p) {
            weights_.back() += w;  // merge coincident atoms
        } else {
            points_.push_back(p);
            weights_.push_back(w);
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
    }
}

DiscreteMeasure DiscreteMeasure::uniform_on(std::vector<double> points) {
    std::vector<double> w(points.size(),
                          points.empty() ? 0.0 : 1.0 / points.size());
    return DiscreteMeasure(std::move(points), std::move(w));
}

}  // namespace flp
