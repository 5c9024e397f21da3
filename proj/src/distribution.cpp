#include "flp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "flp/rng.hpp"

namespace flp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double check_prob(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("quantile argument must lie in (0,1)");
    }
    return q;
}

// Acklam's rational approximation to the standard normal quantile,
// refined below by Newton steps on the cdf.
double norm_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_quantile(double p) {
    double x = norm_quantile_approx(p);
    // Two Newton refinements push the error below 1e-12.
    for (int i = 0; i < 2; ++i) {
        double pdf = norm_pdf(x);
        if (pdf > 0) x -= (norm_cdf(x) - p) / pdf;
    }
    return x;
}

class Uniform final : public Distribution {
public:
    Uniform(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo < hi)) throw std::invalid_argument("uniform: lo < hi required");
    }
    std::string kind() const override { return "uniform"; }
    double cdf(double t) const override {
        return std::clamp((t - lo_) / (hi_ - lo_), 0.0, 1.0);
    }
    double quantile(double q) const override {
        return lo_ + check_prob(q) * (hi_ - lo_);
    }
    double density(double t) const override {
        return (t >= lo_ && t <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
    }
    double support_lo() const override { return lo_; }
    double support_hi() const override { return hi_; }

private:
    double lo_, hi_;
};

class Gaussian final : public Distribution {
public:
    Gaussian(double mean, double stddev) : mean_(mean), sd_(stddev) {
        if (!(stddev > 0)) throw std::invalid_argument("gaussian: std > 0 required");
    }
    std::string kind() const override { return "gaussian"; }
    double cdf(double t) const override { return norm_cdf((t - mean_) / sd_); }
    double quantile(double q) const override {
        return mean_ + sd_ * norm_quantile(check_prob(q));
    }
    double density(double t) const override {
        return norm_pdf((t - mean_) / sd_) / sd_;
    }
    double support_lo() const override { return -kInf; }
    double support_hi() const override { return kInf; }

private:
    double mean_, sd_;
};

class Exponential final : public Distribution {
public:
    explicit Exponential(double rate) : rate_(rate) {
        if (!(rate > 0)) throw std::invalid_argument("exponential: rate > 0 required");
    }
    std::string kind() const override { return "exponential"; }
    double cdf(double t) const override {
        return t <= 0 ? 0.0 : -std::expm1(-rate_ * t);
    }
    double quantile(double q) const override {
        return -std::log1p(-check_prob(q)) / rate_;
    }
    double density(double t) const override {
        return t < 0 ? 0.0 : rate_ * std::exp(-rate_ * t);
    }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return kInf; }

private:
    double rate_;
};

class Affine final : public Distribution {
public:
    Affine(DistPtr base, double sigma, double shift)
        : base_(std::move(base)), sigma_(sigma), shift_(shift) {
        if (!(sigma > 0)) throw std::domain_error("affine: scale must be positive");
    }
    std::string kind() const override { return "affine"; }
    double cdf(double t) const override {
        return base_->cdf((t - shift_) / sigma_);
    }
    double quantile(double q) const override {
        return sigma_ * base_->quantile(q) + shift_;
    }
    double density(double t) const override {
        return base_->density((t - shift_) / sigma_) / sigma_;
    }
    double support_lo() const override {
        double a = base_->support_lo();
        return std::isinf(a) ? a : sigma_ * a + shift_;
    }
    double support_hi() const override {
        double b = base_->support_hi();
        return std::isinf(b) ? b : sigma_ * b + shift_;
    }

private:
    DistPtr base_;
    double sigma_, shift_;
};

class Truncated final : public Distribution {
public:
    Truncated(DistPtr base, double a, double b)
        : base_(std::move(base)), a_(a), b_(b) {
        if (!(a < b)) throw std::invalid_argument("truncate: a < b required");
        fa_ = base_->cdf(a);
        fb_ = base_->cdf(b);
        if (!(fb_ - fa_ > 0)) {
            throw std::invalid_argument("truncate: interval carries no mass");
        }
    }
    std::string kind() const override { return "truncated"; }
    double cdf(double t) const override {
        return std::clamp((base_->cdf(t) - fa_) / (fb_ - fa_), 0.0, 1.0);
    }
    double quantile(double q) const override {
        return base_->quantile(fa_ + check_prob(q) * (fb_ - fa_));
    }
    double density(double t) const override {
        return (t >= a_ && t <= b_) ? base_->density(t) / (fb_ - fa_) : 0.0;
    }
    double support_lo() const override { return a_; }
    double support_hi() const override { return b_; }

private:
    DistPtr base_;
    double a_, b_, fa_, fb_;
};

// Piecewise-linear interpolation of the empirical cdf: F(x_i) = (i-1)/(n-1)
// at the order statistics, linear in between.
class Empirical final : public Distribution {
public:
    explicit Empirical(std::vector<double> values) : x_(std::move(values)) {
        if (x_.size() < 2) {
            throw std::invalid_argument("empirical: at least 2 values required");
        }
        std::sort(x_.begin(), x_.end());
        if (!(x_.front() < x_.back())) {
            throw std::invalid_argument("empirical: all values coincide");
        }
    }
    std::string kind() const override { return "empirical"; }
    double cdf(double t) const override {
        if (t <= x_.front()) return 0.0;
        if (t >= x_.back()) return 1.0;
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());  // >= 1
        double lo = x_[i - 1], hi = x_[i];
        double base = static_cast<double>(i - 1) / (x_.size() - 1);
        if (hi == lo) return base;
        return base + (t - lo) / (hi - lo) / (x_.size() - 1);
    }
    double quantile(double q) const override {
        check_prob(q);
        double pos = q * (x_.size() - 1);
        std::size_t i = std::min(static_cast<std::size_t>(pos), x_.size() - 2);
        double frac = pos - static_cast<double>(i);
        return x_[i] + frac * (x_[i + 1] - x_[i]);
    }
    double density(double t) const override {
        if (t < x_.front() || t > x_.back()) return 0.0;
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = std::min(static_cast<std::size_t>(it - x_.begin()),
                                 x_.size() - 1);
        if (i == 0) i = 1;
        double w = x_[i] - x_[i - 1];
        return w > 0 ? 1.0 / (w * (x_.size() - 1)) : 0.0;
    }
    double support_lo() const override { return x_.front(); }
    double support_hi() const override { return x_.back(); }

    // The quantile is piecewise linear with knots at i/(n-1), so its
    // integral is an exact trapezoid sum over the covered segments.
    double quantile_integral(double qa, double qb) const override {
        if (!(qb > qa)) return 0.0;
        double n1 = static_cast<double>(x_.size() - 1);
        double total = 0.0;
        std::size_t i = std::min(static_cast<std::size_t>(qa * n1), x_.size() - 2);
        double lo = qa;
        while (lo < qb) {
            double knot = static_cast<double>(i + 1) / n1;
            double hi = std::min(qb, knot);
            total += 0.5 * (hi - lo) * (quantile(lo) + quantile(hi));
            lo = hi;
            ++i;
        }
        return total;
    }

private:
    std::vector<double> x_;
};

}  // namespace

double Distribution::trunc_lo() const {
    double a = support_lo();
    return std::isinf(a) ? quantile(kTailEps) : a;
}

double Distribution::trunc_hi() const {
    double b = support_hi();
    return std::isinf(b) ? quantile(1.0 - kTailEps) : b;
}

double Distribution::conditional_median(double a, double b) const {
    if (!(a < b)) throw std::invalid_argument("conditional_median: a < b required");
    double fa = std::isinf(a) && a < 0 ? 0.0 : cdf(a);
    double fb = std::isinf(b) && b > 0 ? 1.0 : cdf(b);
    if (!(fb - fa > 0)) {
        throw std::invalid_argument("conditional_median: zero-mass interval");
    }
    return quantile(0.5 * (fa + fb));
}

std::vector<double> Distribution::sample(std::size_t n,
                                         std::uint64_t seed) const {
    SplitMix64 gen(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = quantile(gen.next_unit());
    std::sort(out.begin(), out.end());
    return out;
}

DistPtr make_uniform(double lo, double hi) {
    return std::make_shared<Uniform>(lo, hi);
}
DistPtr make_gaussian(double mean, double stddev) {
    return std::make_shared<Gaussian>(mean, stddev);
}
DistPtr make_exponential(double rate) {
    return std::make_shared<Exponential>(rate);
}
DistPtr affine_pushforward(DistPtr base, double sigma, double shift) {
    return std::make_shared<Affine>(std::move(base), sigma, shift);
}
DistPtr truncate(DistPtr base, double a, double b) {
    return std::make_shared<Truncated>(std::move(base), a, b);
}
DistPtr make_empirical(std::vector<double> values) {
    return std::make_shared<Empirical>(std::move(values));
}

}  // namespace flp
