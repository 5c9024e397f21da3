#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <doctest.h>

#include "flp/discrete_measure.hpp"
#include "flp/distribution.hpp"
#include "flp/rng.hpp"
#include "flp/transport.hpp"

using namespace flp;

namespace {

// Brute-force W1 between equal-size uniform empirical measures: minimum
// average displacement over all permutations. Oracle for the sorted
// matching formula.
double w1_brute_force(std::vector<double> a, std::vector<double> b) {
    std::sort(b.begin(), b.end());
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0;
        for (std::size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[i]);
        best = std::min(best, cost);
    } while (std::next_permutation(b.begin(), b.end()));
    return best / static_cast<double>(a.size());
}

// Closed form of the fixed-support projection cost for uniform[0,1]
// (sum over cells of half the squared gaps to the neighbours).
double uniform_fixed_support_cost(const std::vector<double>& v) {
    double total = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double prev = i == 0 ? 0.0 : 0.5 * (v[i - 1] + v[i]);
        double next = i + 1 == v.size() ? 1.0 : 0.5 * (v[i] + v[i + 1]);
        // integral of |x - v_i| over [prev, next]
        total += 0.5 * ((v[i] - prev) * (v[i] - prev) + (next - v[i]) * (next - v[i]));
    }
    return total;
}

}  // namespace

TEST_CASE("w1_empirical") {
    std::vector<double> a{0, 1}, b{0, 1};
    CHECK(w1_empirical(a, b) == 0.0);
    CHECK(w1_empirical(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 1.0);

    std::vector<double> p{0, 1, 2}, q{0, 0, 3};
    double oracle = w1_brute_force(p, q);
    CHECK(oracle == doctest::Approx(2.0 / 3.0));
    CHECK(w1_empirical(p, q) == doctest::Approx(oracle));

    CHECK_THROWS_AS((void)w1_empirical(p, a), std::invalid_argument);
}

TEST_CASE("w1_empirical metric axioms on random instances") {
    SplitMix64 gen(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + static_cast<std::size_t>(gen.next() % 64);
        auto draw = [&] {
            std::vector<double> v(n);
            for (auto& x : v) x = gen.next_unit() * 10.0 - 5.0;
            std::sort(v.begin(), v.end());
            return v;
        };
        auto a = draw(), b = draw(), c = draw();
        double ab = w1_empirical(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(w1_empirical(b, a)));
        CHECK(w1_empirical(a, a) == 0.0);
        CHECK(ab <= w1_empirical(a, c) + w1_empirical(c, b) + 1e-12);
    }
}

TEST_CASE("mechanism_cost") {
    CHECK(mechanism_cost(std::vector<double>{0, 2}, std::vector<double>{1}) == 1.0);
    CHECK(mechanism_cost(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 3}) ==
          doctest::Approx(0.5));
    CHECK(mechanism_cost(std::vector<double>{0, 1, 8, 9, 10},
                         std::vector<double>{1, 9}) == doctest::Approx(0.6));
    CHECK_THROWS_AS((void)mechanism_cost(std::vector<double>{1}, std::vector<double>{}),
                    std::invalid_argument);
}

TEST_CASE("w1_continuous_fixed_support against closed forms") {
    auto u = make_uniform(0, 1);
    CHECK(w1_continuous_fixed_support(*u, std::vector<double>{0.25, 0.75}) ==
          doctest::Approx(0.125).epsilon(1e-9));
    CHECK(w1_continuous_fixed_support(*u, std::vector<double>{0.25}) ==
          doctest::Approx(0.3125).epsilon(1e-9));
    // mean absolute deviation of the standard normal
    auto g = make_gaussian(0, 1);
    double mad = std::sqrt(2.0 / std::numbers::pi);
    CHECK(w1_continuous_fixed_support(*g, std::vector<double>{0.0}) ==
          doctest::Approx(mad).epsilon(1e-8));
}

TEST_CASE("uniform closed form matches quadrature for random supports") {
    auto u = make_uniform(0, 1);
    SplitMix64 gen(5);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t k = 1 + gen.next() % 4;
        std::vector<double> v(k);
        for (auto& x : v) x = gen.next_unit();
        std::sort(v.begin(), v.end());
        CHECK(w1_continuous_fixed_support(*u, v) ==
              doctest::Approx(uniform_fixed_support_cost(v)).epsilon(1e-8));
    }
}

TEST_CASE("w1_continuous_discrete") {
    auto g = make_gaussian(0, 1);
    DiscreteMeasure median({0.0}, {1.0});
    CHECK(w1_continuous_discrete(*g, median) ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-8));

    auto u = make_uniform(0, 1);
    DiscreteMeasure balanced({0.25, 0.75}, {0.5, 0.5});
    CHECK(w1_continuous_discrete(*u, balanced) == doctest::Approx(0.125).epsilon(1e-9));
    DiscreteMeasure lopsided({0.25, 0.75}, {1.0, 0.0});
    CHECK(w1_continuous_discrete(*u, lopsided) == doctest::Approx(0.3125).epsilon(1e-9));
}

TEST_CASE("fixed-support cost is dominated by prescribed-weight cost") {
    SplitMix64 gen(11);
    auto laws = std::vector<DistPtr>{make_uniform(0, 1), make_gaussian(0, 1),
                                     make_exponential(1)};
    for (int trial = 0; trial < 20; ++trial) {
        const auto& mu = laws[trial % laws.size()];
        std::size_t k = 1 + gen.next() % 3;
        std::vector<double> pts(k);
        for (auto& p : pts) p = mu->quantile(0.05 + 0.9 * gen.next_unit());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::vector<double> w(pts.size());
        double total = 0;
        for (auto& x : w) total += (x = gen.next_unit() + 0.01);
        for (auto& x : w) x /= total;
        DiscreteMeasure nu(pts, w);
        double fixed = w1_continuous_fixed_support(*mu, pts);
        double coupled = w1_continuous_discrete(*mu, nu);
        CHECK(fixed <= coupled + 1e-9);
    }
}

TEST_CASE("transport scales with affine push-forward") {
    auto mu = make_exponential(1);
    std::vector<double> y{0.3, 1.1};
    double base = w1_continuous_fixed_support(*mu, y);
    for (double sigma : {0.5, 2.0, 10.0}) {
        auto pushed = affine_pushforward(mu, sigma, 3.0);
        std::vector<double> ys(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) ys[j] = sigma * y[j] + 3.0;
        CHECK(w1_continuous_fixed_support(*pushed, ys) ==
              doctest::Approx(sigma * base).epsilon(1e-8));
    }
}

TEST_CASE("w_infinity") {
    auto u = make_uniform(0, 1);
    CHECK(w_infinity(*u, *u) == doctest::Approx(0.0));
    auto shifted = make_uniform(0.1, 1.1);
    CHECK(w_infinity(*u, *shifted) == doctest::Approx(0.1).epsilon(1e-6));
    auto g0 = make_gaussian(0, 1);
    auto g2 = make_gaussian(-2, 1);
    CHECK(w_infinity(*g0, *g2) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("nu_q_measure") {
    auto u = make_uniform(0, 1);
    auto m = nu_q_measure(*u, std::vector<double>{0.25, 0.75});
    CHECK(m.points() == std::vector<double>{0.25, 0.75});
    CHECK(m.weights()[0] == doctest::Approx(0.5));
    CHECK(m.weights()[1] == doctest::Approx(0.5));

    auto single = nu_q_measure(*u, std::vector<double>{0.5});
    CHECK(single.points() == std::vector<double>{0.5});
    CHECK(single.weights() == std::vector<double>{1.0});

    auto e = make_exponential(1);
    auto em = nu_q_measure(*e, std::vector<double>{1.0 / 3.0, 5.0 / 6.0});
    CHECK(em.points()[0] == doctest::Approx(std::log(1.5)).epsilon(1e-12));
    CHECK(em.points()[1] == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    CHECK(em.weights()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(em.weights()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)nu_q_measure(*u, std::vector<double>{0.0, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)nu_q_measure(*u, std::vector<double>{0.5, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("nu_q_measure weights are the cell masses of the density") {
    auto laws = std::vector<DistPtr>{make_uniform(0, 1), make_gaussian(0, 1),
                                     make_exponential(1)};
    SplitMix64 gen(31);
    for (const auto& mu : laws) {
        std::vector<double> v(3);
        for (auto& q : v) q = 0.05 + 0.9 * gen.next_unit();
        std::sort(v.begin(), v.end());
        auto m = nu_q_measure(*mu, v);
        double z_prev = mu->trunc_lo();
        for (std::size_t j = 0; j < m.size(); ++j) {
            double z_next = j + 1 < m.size()
                                ? 0.5 * (m.points()[j] + m.points()[j + 1])
                                : mu->trunc_hi();
            auto f = [&](double t) { return mu->density(t); };
            double mass = adaptive_simpson(f, z_prev, z_next, 1e-11);
            CHECK(mass == doctest::Approx(m.weights()[j]).epsilon(1e-7));
            z_prev = z_next;
        }
    }
}

TEST_CASE("empirical cell costs match direct quadrature") {
    SplitMix64 gen(63);
    std::vector<double> values(200);
    for (auto& x : values) x = gen.next_unit() * 4.0 - 2.0;
    auto emp = make_empirical(values);
    // the closed-form piecewise-linear integral vs brute Simpson on the
    // same integrand
    for (double y : {-1.5, -0.2, 0.0, 0.7, 1.9}) {
        auto g = [&](double q) { return std::abs(emp->quantile(q) - y); };
        double brute = 0;
        constexpr int panels = 512;
        double lo = 1e-9, hi = 1.0 - 1e-9;
        for (int i = 0; i < panels; ++i) {
            brute += adaptive_simpson(g, lo + (hi - lo) * i / panels,
                                      lo + (hi - lo) * (i + 1) / panels, 1e-12);
        }
        CHECK(w1_continuous_fixed_support(*emp, std::vector<double>{y}) ==
              doctest::Approx(brute).epsilon(1e-7));
    }
}

TEST_CASE("DiscreteMeasure canonical form") {
    DiscreteMeasure m({2.0, 1.0, 2.0}, {0.25, 0.5, 0.25});
    CHECK(m.points() == std::vector<double>{1.0, 2.0});
    CHECK(m.weights() == std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(DiscreteMeasure({0.0}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({0.0, 1.0}, {1.5, -0.5}), std::invalid_argument);
}
