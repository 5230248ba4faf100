#include <doctest.h>

#include <cmath>

#include "condpath/cost_profile.hpp"
#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"
#include "condpath/trajectory.hpp"
#include "oracles.hpp"

using namespace condpath;

namespace {

// independent oracle: dense grid + finite-difference bisection polish
std::vector<double> oracle_minima(const ProcessModel& m, const RateFunction& rate,
                                  double b, double T, double lo, double hi) {
    return oracles::grid_polish_minima(
        [&](double A) { return total_cost_at(m, rate, A, b, T); }, lo, hi);
}

}  // namespace

TEST_CASE("path cost closed forms") {
    CHECK(path_cost_closed_form(ProcessModel::brownian(), 1.0, 0.0, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    auto ou = ProcessModel::ornstein_uhlenbeck(0.7);
    CHECK(std::abs(path_cost_closed_form(ou, 0.3 * std::exp(0.7), 0.3, 1.0)) <= 1e-13);
    CHECK(std::abs(path_cost_closed_form(ProcessModel::spin_flip(1.0), 0.0, 0.0, 2.0)) <=
          1e-12);
    // BrownianDrift: (1/2)((b-A)/T - V)^2 T
    auto bd = ProcessModel::brownian_drift(0.4);
    double A = -0.3, b = 0.9, T = 1.7;
    double v = (b - A) / T;
    CHECK(path_cost_closed_form(bd, A, b, T) ==
          doctest::Approx(0.5 * (v - 0.4) * (v - 0.4) * T).epsilon(1e-13));
}

TEST_CASE("Brownian quartic profile: minimizers, alpha, cubic stationarity") {
    auto bm = ProcessModel::brownian();
    auto rate = RateFunction::quartic(2.0);

    SUBCASE("T = 1: symmetric pair at +-sqrt(3.75)") {
        auto profile = build_profile(bm, rate, 0.0, 1.0);
        REQUIRE(profile.global_minimizers.size() == 2);
        double expect = std::sqrt(3.75);
        CHECK(profile.global_minimizers[0] == doctest::Approx(-expect).epsilon(1e-10));
        CHECK(profile.global_minimizers[1] == doctest::Approx(expect).epsilon(1e-10));
        CHECK(*profile.alpha == doctest::Approx(0.5 - 8.0).epsilon(1e-14));

        auto oracle = oracle_minima(bm, rate, 0.0, 1.0, -6.0, 6.0);
        REQUIRE(oracle.size() == 2);
        CHECK(profile.global_minimizers[0] == doctest::Approx(oracle[0]).epsilon(1e-8));
        CHECK(profile.global_minimizers[1] == doctest::Approx(oracle[1]).epsilon(1e-8));
    }
    SUBCASE("T below 1/(4a^2): unique minimizer at 0") {
        auto profile = build_profile(bm, rate, 0.0, 0.05);
        REQUIRE(profile.global_minimizers.size() == 1);
        CHECK(std::abs(profile.global_minimizers[0]) <= 1e-10);
        auto pred = predict_conditional_limit(profile);
        CHECK(pred.kind == PredictionKind::PointMass);
    }
    SUBCASE("stationary points solve 4A^3 + 2 alpha A = b/T") {
        oracles::Draw draw(3);
        for (int k = 0; k < 40; ++k) {
            double b = draw.uniform(-1.0, 1.0);
            double T = draw.uniform(0.05, 3.0);
            auto profile = build_profile(bm, rate, b, T);
            double alpha = 1.0 / (2.0 * T) - 8.0;
            for (const auto& sp : profile.stationary_points) {
                double residual =
                    4.0 * std::pow(sp.location, 3) + 2.0 * alpha * sp.location - b / T;
                CHECK(std::abs(residual) <= 1e-10);
            }
        }
    }
    SUBCASE("large-T minimizers approach +-a") {
        auto profile = build_profile(bm, rate, 0.0, 4000.0);
        REQUIRE(profile.global_minimizers.size() == 2);
        CHECK(profile.global_minimizers[1] == doctest::Approx(2.0).epsilon(1e-4));
    }
}

TEST_CASE("profile values equal i(A) plus the trajectory action (cost consistency)") {
    auto bm = ProcessModel::brownian();
    auto rate = RateFunction::quartic(2.0);
    auto profile = build_profile(bm, rate, 0.3, 0.8);
    for (std::size_t i = 0; i < profile.grid.size(); i += 157) {
        double A = profile.grid[i];
        auto traj = el_closed_form(bm, A, 0.3, 0.8, 801);
        double numeric = action_integral(bm, traj) + eval_i(rate, A);
        CHECK(profile.values[i] == doctest::Approx(numeric).epsilon(1e-9));
    }
}

TEST_CASE("sextic equal-height gap reproduces the printed values") {
    auto bm = ProcessModel::brownian();
    auto sextic = RateFunction::sextic();
    auto p1 = build_profile(bm, sextic, 0.499, 1.0);
    CHECK(equal_height_gap(p1) == doctest::Approx(-0.00182497).epsilon(2e-4));
    auto p2 = build_profile(bm, sextic, 0.4999, 1.0);
    CHECK(equal_height_gap(p2) == doctest::Approx(0.000868034).epsilon(2e-4));

    SUBCASE("symmetric profile at b=0 has zero gap") {
        auto p = build_profile(bm, RateFunction::quartic(2.0), 0.0, 1.0);
        CHECK(std::abs(equal_height_gap(p)) <= 1e-10);
    }
    SUBCASE("sign of the gap picks the positive-side minimum for b > 0") {
        auto p = build_profile(bm, RateFunction::quartic(2.0), 0.1, 1.0);
        // global min on the positive side means the left minimum sits higher
        CHECK(equal_height_gap(p) > 0.0);
        auto pred = predict_conditional_limit(p);
        REQUIRE(pred.kind == PredictionKind::PointMass);
        CHECK(pred.locations[0] > 0.0);
    }
    SUBCASE("fewer than two minima throws") {
        auto p = build_profile(bm, RateFunction::quadratic(1.0, 0.0), 0.0, 1.0);
        CHECK_THROWS_AS(equal_height_gap(p), FewMinimaError);
    }
}

TEST_CASE("strictly convex rate: exactly one stationary point for any (b, T)") {
    auto bm = ProcessModel::brownian();
    auto rate = RateFunction::quadratic(0.9, 0.2);
    oracles::Draw draw(41);
    for (int k = 0; k < 200; ++k) {
        double b = draw.uniform(-4.0, 4.0);
        double T = draw.uniform(0.01, 10.0);
        auto pts = profile_stationary_points(bm, rate, b, T);
        CHECK(pts.size() == 1);
        CHECK(pts[0].kind == StationaryKind::Minimum);
    }
}

TEST_CASE("mirror symmetry: E_{-b,T}(-A) = E_{b,T}(A) for even rate, odd drift") {
    oracles::Draw draw(5);
    std::vector<ProcessModel> models = {ProcessModel::brownian(),
                                        ProcessModel::ornstein_uhlenbeck(0.7),
                                        ProcessModel::spin_flip(1.0)};
    for (const auto& m : models) {
        bool compact = m.kind == ModelKind::SpinFlip;
        for (int k = 0; k < 25; ++k) {
            double b = compact ? draw.uniform(-0.6, 0.6) : draw.uniform(-1.5, 1.5);
            double A = compact ? draw.uniform(-0.8, 0.8) : draw.uniform(-3.0, 3.0);
            double T = draw.uniform(0.3, 2.0);
            auto rate = RateFunction::quartic(compact ? 0.5 : 2.0);
            double lhs = total_cost_at(m, rate, -A, -b, T);
            double rhs = total_cost_at(m, rate, A, b, T);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("constant drift at terminal VT matches zero drift at terminal 0") {
    double V = 0.8, T = 1.3;
    auto drift = ProcessModel::brownian_drift(V);
    auto flat = ProcessModel::brownian();
    auto rate = RateFunction::quartic(2.0);
    for (int i = 0; i <= 200; ++i) {
        double A = -6.0 + 12.0 * i / 200.0;
        CHECK(total_cost_at(drift, rate, A, V * T, T) ==
              doctest::Approx(total_cost_at(flat, rate, A, 0.0, T)).epsilon(1e-10));
    }
}

TEST_CASE("short-time uniqueness bound") {
    auto bound = short_time_uniqueness_bound(RateFunction::quartic(2.0));
    REQUIRE(bound.has_value());
    CHECK(*bound == doctest::Approx(0.0625).epsilon(1e-14));  // 1/(4 a^2) = -1/d
    CHECK(!short_time_uniqueness_bound(RateFunction::quadratic(1.0, 0.0)).has_value());
    CHECK(!short_time_uniqueness_bound(RateFunction::oscillatory_integral()).has_value());

    SUBCASE("below the bound every b gives a unique minimizer") {
        auto bm = ProcessModel::brownian();
        for (const auto& rate : {RateFunction::quartic(2.0), RateFunction::sextic()}) {
            double T = 0.9 * *short_time_uniqueness_bound(rate);
            oracles::Draw draw(7);
            for (int k = 0; k < 100; ++k) {
                double b = draw.uniform(-8.0, 8.0);
                auto pts = profile_stationary_points(bm, rate, b, T);
                int minima = 0;
                for (const auto& sp : pts)
                    if (sp.kind == StationaryKind::Minimum) ++minima;
                CHECK(pts.size() == 1);
                CHECK(minima == 1);
            }
        }
    }
}

TEST_CASE("OU profile built from shooting agrees with the closed form") {
    auto ou = ProcessModel::ornstein_uhlenbeck(0.7);
    auto rate = RateFunction::quartic(2.0);
    double b = 0.1, T = 1.0;
    auto profile = build_profile(ou, rate, b, T);
    for (double A : profile.global_minimizers) {
        auto sols = shoot_bvp(ou, A, b, T);
        double best = 1e300;
        for (const auto& s : sols) best = std::min(best, s.action);
        CHECK(path_cost_closed_form(ou, A, b, T) == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("spin-flip profile: symmetric minimizers against the grid oracle") {
    auto sf = ProcessModel::spin_flip(1.0);
    auto rate = RateFunction::quartic(0.5);
    double T = 2.0;
    auto profile = build_profile(sf, rate, 0.0, T);
    REQUIRE(profile.global_minimizers.size() == 2);
    CHECK(profile.global_minimizers[0] ==
          doctest::Approx(-profile.global_minimizers[1]).epsilon(1e-9));
    auto oracle = oracle_minima(sf, rate, 0.0, T, -0.95, 0.95);
    REQUIRE(oracle.size() == 2);
    CHECK(profile.global_minimizers[1] == doctest::Approx(oracle[1]).epsilon(1e-6));
}

TEST_CASE("prediction taxonomy") {
    auto bm = ProcessModel::brownian();
    SUBCASE("point mass below criticality") {
        auto p = build_profile(bm, RateFunction::quartic(2.0), 0.0, 0.05);
        auto pred = predict_conditional_limit(p);
        CHECK(pred.kind == PredictionKind::PointMass);
        REQUIRE(pred.locations.size() == 1);
        CHECK(std::abs(pred.locations[0]) <= 1e-9);
    }
    SUBCASE("symmetric pair above criticality with half weights") {
        auto p = build_profile(bm, RateFunction::quartic(2.0), 0.0, 1.0);
        auto pred = predict_conditional_limit(p);
        CHECK(pred.kind == PredictionKind::SymmetricPair);
        REQUIRE(pred.weights.size() == 2);
        CHECK(pred.weights[0] == 0.5);
    }
    SUBCASE("non-symmetric tie reported as multi with open weights") {
        // sextic at its bad point: two global minima at non-mirror locations
        auto p = build_profile(bm, RateFunction::sextic(), 0.49960990333557129, 1.0);
        auto pred = predict_conditional_limit(p);
        if (pred.locations.size() == 2) {
            CHECK(pred.kind == PredictionKind::Multi);
            CHECK(pred.weights.empty());
        }
    }
}

TEST_CASE("non-coercive polynomial rate is rejected") {
    auto bm = ProcessModel::brownian();
    auto rate = RateFunction::polynomial({0.0, 0.0, 0.0, 1.0});  // x^3
    CHECK_THROWS_AS(build_profile(bm, rate, 0.0, 1.0), DomainError);
}
