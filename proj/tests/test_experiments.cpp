#include <cmath>

#include <doctest.h>

#include "flp/distribution.hpp"
#include "flp/experiments.hpp"
#include "flp/kfacility.hpp"
#include "flp/rng.hpp"
#include "flp/serialize.hpp"

using namespace flp;

TEST_CASE("estimate_bar validation and boundary cases") {
    auto u = make_uniform(0, 1);
    std::vector<double> v{0.5};
    CHECK_THROWS_AS((void)estimate_bar(*u, v, 1, 1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_bar(*u, v, 1, 10, 0, 0), std::invalid_argument);

    // single trial at the smallest admissible n
    auto est = estimate_bar(*u, v, 1, 2, 1, 7);
    CHECK(est.ratio >= 1.0);
    CHECK(std::isfinite(est.ratio));
}

TEST_CASE("median mechanism is near-optimal for uniform agents") {
    auto u = make_uniform(0, 1);
    auto est = estimate_bar(*u, std::vector<double>{0.5}, 1, 1001, 200, 2024);
    CHECK(est.ratio >= 1.0 - 1e-12);  // exactly optimal per profile, up to rounding
    CHECK(est.ratio <= 1.05);
}

TEST_CASE("off-optimal percentile tracks the limit ratio") {
    auto u = make_uniform(0, 1);
    auto est = estimate_bar(*u, std::vector<double>{0.25}, 1, 1001, 300, 11);
    CHECK(std::abs(est.ratio - 1.25) < 0.05);  // limit from the closed form
}

TEST_CASE("mechanism cost dominates optimal cost per profile") {
    auto e = make_exponential(1);
    SplitMix64 gen(13);
    std::vector<double> v{0.3, 0.8};
    for (int trial = 0; trial < 50; ++trial) {
        SampleProfile x(e->sample(50, derive_stream(5, static_cast<std::uint64_t>(trial))));
        double mech = social_cost(x, percentile_mechanism(x, PercentileVector(v)));
        double opt = optimal_facilities(x, 2).second;
        CHECK(mech >= opt - 1e-15);
    }
    auto est = estimate_bar(*e, v, 2, 50, 50, 5);
    CHECK(est.ratio >= 1.0);
}

TEST_CASE("estimates are reproducible and thread-count independent") {
    auto g = make_gaussian(0, 1);
    std::vector<double> v{0.25, 0.75};
    auto a = estimate_bar(*g, v, 2, 40, 60, 99, 1);
    auto b = estimate_bar(*g, v, 2, 40, 60, 99, 4);
    CHECK(to_json(a).dump() == to_json(b).dump());
    auto c = estimate_bar(*g, v, 2, 40, 60, 100, 1);
    CHECK(to_json(a).dump() != to_json(c).dump());
}

TEST_CASE("convergence_study") {
    auto u = make_uniform(0, 1);
    std::vector<double> v{0.25, 0.75};  // v_mu for uniform, k = 2

    SUBCASE("degenerate single-point schedule") {
        std::vector<int> schedule{50};
        auto report = convergence_study(*u, v, 2, schedule, 20, 0);
        CHECK_FALSE(report.slope_defined);
        CHECK(report.points.size() == 1);
    }

    SUBCASE("schedule must increase") {
        std::vector<int> bad{100, 50};
        CHECK_THROWS_AS((void)convergence_study(*u, v, 2, bad, 10, 0),
                        std::invalid_argument);
    }

    SUBCASE("ratio approaches the limit from above") {
        std::vector<int> schedule{25, 100, 400};
        auto report = convergence_study(*u, v, 2, schedule, 400, 31);
        CHECK(report.limit == doctest::Approx(1.0).epsilon(1e-8));
        for (const auto& p : report.points) {
            CHECK(p.ratio >= 1.0 - 3.0 * p.se_ratio);
        }
        CHECK(report.points.front().ratio > report.points.back().ratio);
        CHECK(report.slope_defined);
        CHECK(report.slope < 0.0);
    }
}

TEST_CASE("robustness_study") {
    auto u = make_uniform(0, 1);

    SUBCASE("perfect knowledge of mu") {
        auto report = robustness_study(u, u, 2, 100, 20, 3);
        CHECK(report.w_inf <= 1e-9);
        CHECK(report.w1 <= 1e-9);
        CHECK(report.measured <= 1e-8);
        CHECK_FALSE(report.truncated);
    }

    SUBCASE("shifted uniform approximation") {
        auto shifted = make_uniform(0.05, 1.05);
        auto report = robustness_study(u, shifted, 2, 100, 20, 3);
        CHECK(report.w_inf == doctest::Approx(0.05).epsilon(1e-5));
        CHECK(report.w1 == doctest::Approx(0.05).epsilon(1e-5));
        CHECK(report.projection_cost == doctest::Approx(0.125).epsilon(1e-8));
        CHECK(report.bound == doctest::Approx(1.2).epsilon(1e-4));
        CHECK(report.measured <= report.bound);
        CHECK(report.measured < 0.2);  // far below the bound for a small shift
    }

    SUBCASE("unbounded laws are truncated and flagged") {
        auto g = make_gaussian(0, 1);
        auto report = robustness_study(g, g, 1, 50, 10, 1);
        CHECK(report.truncated);
        CHECK(report.measured <= 1e-8);
    }
}
