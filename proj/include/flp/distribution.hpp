#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace flp {

/// A one-dimensional probability law with absolutely continuous cdf,
/// interval support and positive density on the interior of the support.
///
/// All operations are pure and the object is immutable after construction,
/// so concurrent use is safe.
class Distribution {
public:
    virtual ~Distribution() = default;

    virtual std::string kind() const = 0;

    /// F(t), clamped to [0,1] outside the support.
    virtual double cdf(double t) const = 0;

    /// F^{-1}(q) for q in (0,1). Throws std::domain_error otherwise.
    virtual double quantile(double q) const = 0;

    /// Density at t (0 outside the support).
    virtual double density(double t) const = 0;

    /// Support endpoints; may be +-infinity.
    virtual double support_lo() const = 0;
    virtual double support_hi() const = 0;

    /// Support endpoints truncated at quantiles eps and 1-eps (eps = 1e-9)
    /// when infinite, for use as quadrature bounds.
    double trunc_lo() const;
    double trunc_hi() const;

    /// Integral of the quantile function over [qa, qb] when a closed form
    /// exists; NaN otherwise (callers fall back to quadrature). Used where
    /// quadrature error estimates are unreliable, e.g. on the kinky
    /// piecewise-linear quantile of an empirical law.
    virtual double quantile_integral(double /*qa*/, double /*qb*/) const {
        return std::numeric_limits<double>::quiet_NaN();
    }

    /// Median of the law restricted to (a, b): quantile((F(a)+F(b))/2).
    /// Throws std::invalid_argument on a zero-mass interval.
    double conditional_median(double a, double b) const;

    /// n i.i.d. draws by inverse-cdf sampling with a SplitMix64 stream,
    /// returned sorted nondecreasing. Deterministic in (seed, n).
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    static constexpr double kTailEps = 1e-9;
};

using DistPtr = std::shared_ptr<const Distribution>;

DistPtr make_uniform(double lo, double hi);
DistPtr make_gaussian(double mean, double stddev);
DistPtr make_exponential(double rate);

/// Law of sigma*X + m for X ~ base. Requires sigma > 0.
DistPtr affine_pushforward(DistPtr base, double sigma, double shift);

/// Law of X ~ base conditioned on [a, b]. Requires positive mass on [a, b].
DistPtr truncate(DistPtr base, double a, double b);

/// Piecewise-linear interpolation of the empirical cdf of a sample
/// (values need not be pre-sorted; n >= 2). Satisfies the absolute
/// continuity assumptions, unlike the step empirical cdf.
DistPtr make_empirical(std::vector<double> values);

}  // namespace flp
