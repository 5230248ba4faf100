#include <doctest.h>

#include <cmath>

#include "condpath/errors.hpp"
#include "condpath/trajectory.hpp"
#include "oracles.hpp"

using namespace condpath;

namespace {

double sup_distance_on_shared_grid(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.positions.size() == b.positions.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        worst = std::max(worst, std::abs(a.positions[i] - b.positions[i]));
    return worst;
}

}  // namespace

TEST_CASE("Brownian extremal is the straight line with action A^2/(2T)") {
    auto bm = ProcessModel::brownian();
    double A = 1.7, T = 2.5;
    auto traj = el_closed_form(bm, A, 0.0, T, 501);
    CHECK(traj.action == doctest::Approx(A * A / (2.0 * T)).epsilon(1e-13));
    CHECK(std::abs(traj.positions.back()) <= 1e-9);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double expect = A - A / T * traj.times[i];
        CHECK(traj.positions[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    // zero-energy start: action 0
    auto flat = el_closed_form(bm, 0.4, 0.4, 1.0, 101);
    CHECK(std::abs(flat.action) <= 1e-14);
}

TEST_CASE("OU path cost matches kappa (g0 - b e^{kT})^2 / (e^{2kT} - 1)") {
    double kappa = 0.7;
    auto ou = ProcessModel::ornstein_uhlenbeck(kappa);
    oracles::Draw draw(3);
    for (int k = 0; k < 50; ++k) {
        double g0 = draw.uniform(-2.0, 2.0);
        double b = draw.uniform(-2.0, 2.0);
        double T = draw.uniform(0.3, 3.0);
        auto traj = el_closed_form(ou, g0, b, T, 201);
        double e = std::exp(kappa * T);
        double expect = kappa * (g0 - b * e) * (g0 - b * e) / (e * e - 1.0);
        CHECK(traj.action == doctest::Approx(expect).epsilon(1e-11));
        CHECK(traj.positions.back() == doctest::Approx(b).epsilon(1e-12));
    }
    // zero-energy start A = b e^{kT}
    auto zero = el_closed_form(ou, 0.3 * std::exp(kappa), 0.3, 1.0, 101);
    CHECK(std::abs(zero.action) <= 1e-13);
    CHECK(std::abs(zero.energy) <= 1e-13);
}

TEST_CASE("hamilton flow: Brownian straight line, energy recorded") {
    auto bm = ProcessModel::brownian();
    auto traj = hamilton_flow(bm, 1.0, -1.0, 1.0, 1e-3);
    CHECK(traj.energy == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(traj.positions.back() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(traj.energy_drift <= 1e-12);
}

TEST_CASE("hamilton flow: spin-flip fixed point stays put") {
    auto sf = ProcessModel::spin_flip(1.0);
    auto traj = hamilton_flow(sf, 0.0, 0.0, 2.0, 1e-3);
    for (double x : traj.positions) CHECK(std::abs(x) <= 1e-14);
}

TEST_CASE("symmetric spin-flip flows satisfy x'' = 4x") {
    auto sf = ProcessModel::spin_flip(1.0);
    auto traj = hamilton_flow(sf, -0.3, 0.1, 0.4, 2e-4);
    REQUIRE(!traj.exited_state_space);
    double h = traj.times[1] - traj.times[0];
    for (std::size_t i = 10; i + 10 < traj.positions.size(); i += 37) {
        double xdd = (traj.positions[i + 1] - 2.0 * traj.positions[i] +
                      traj.positions[i - 1]) /
                     (h * h);
        if (std::abs(traj.positions[i]) < 0.05) continue;
        CHECK(xdd / traj.positions[i] == doctest::Approx(4.0).epsilon(1e-5));
    }
}

TEST_CASE("energy conservation improves at 4th order under step halving") {
    struct Case {
        ProcessModel model;
        double x0, p0, T;
    };
    std::vector<Case> cases = {
        {ProcessModel::ornstein_uhlenbeck(0.9), 1.0, 0.4, 2.0},
        {ProcessModel::ou_field(0.7, 0.1), -0.5, 0.3, 2.0},
        {ProcessModel::general_drift(DriftName::Cubic, 1.0), 0.4, 0.2, 2.0},
        {ProcessModel::spin_flip(1.0), 0.1, 0.2, 1.0},
        {ProcessModel::spin_flip(1.5), -0.2, 0.15, 0.8},
    };
    for (const auto& c : cases) {
        double drift_h = hamilton_flow(c.model, c.x0, c.p0, c.T, 2e-2).energy_drift;
        double drift_h2 = hamilton_flow(c.model, c.x0, c.p0, c.T, 1e-2).energy_drift;
        if (drift_h < 1e-12) continue;  // integrated exactly, nothing to shrink
        CHECK(drift_h / drift_h2 >= 8.0);
    }
}

TEST_CASE("closed = x'^2 - [E^2 + 2E(b+d) + (b-d)^2] vanishes along flows") {
    struct Case {
        ProcessModel model;
        double x0, p0, T;
    };
    std::vector<Case> cases = {{ProcessModel::spin_flip(1.0), 0.1, 0.2, 1.0},
                               {ProcessModel::spin_flip(1.5), -0.2, 0.15, 0.8},
                               {ProcessModel::birth_death(1.3, 0.6), 0.2, 0.4, 1.5}};
    for (const auto& c : cases) {
        const auto& m = c.model;
        auto traj = hamilton_flow(m, c.x0, c.p0, c.T, 2e-4);
        REQUIRE(!traj.exited_state_space);
        double E = traj.energy;
        for (std::size_t i = 0; i < traj.positions.size(); i += 13) {
            double x = traj.positions[i], p = traj.momenta[i];
            double v = m.birth(x) * std::exp(p) - m.death(x) * std::exp(-p);
            double rhs = E * E + 2.0 * E * (m.birth(x) + m.death(x)) +
                         (m.birth(x) - m.death(x)) * (m.birth(x) - m.death(x));
            CHECK(std::abs(v * v - rhs) <= 1e-8);
        }
    }
}

TEST_CASE("shooting reproduces closed forms") {
    SUBCASE("Brownian: p0 = -gamma0/T") {
        auto sols = shoot_bvp(ProcessModel::brownian(), 1.0, 0.0, 2.0);
        REQUIRE(sols.size() == 1);
        CHECK(sols[0].momenta.front() == doctest::Approx(-0.5).epsilon(1e-9));
    }
    SUBCASE("OU against el_closed_form in sup norm") {
        auto ou = ProcessModel::ornstein_uhlenbeck(0.7);
        auto sols = shoot_bvp(ou, 1.3, 0.0, 1.5);
        REQUIRE(sols.size() == 1);
        auto closed = el_closed_form(ou, 1.3, 0.0, 1.5,
                                     static_cast<int>(sols[0].positions.size()));
        CHECK(sup_distance_on_shared_grid(sols[0], closed) <= 1e-6);
        CHECK(sols[0].action == doctest::Approx(closed.action).epsilon(1e-6));
    }
    SUBCASE("OU field against el_closed_form in sup norm") {
        auto m = ProcessModel::ou_field(0.7, 0.1);
        auto sols = shoot_bvp(m, 1.1, 0.3, 1.5);
        REQUIRE(sols.size() == 1);
        auto closed = el_closed_form(m, 1.1, 0.3, 1.5,
                                     static_cast<int>(sols[0].positions.size()));
        CHECK(sup_distance_on_shared_grid(sols[0], closed) <= 1e-6);
    }
    SUBCASE("general linear drift reproduces OU trajectories") {
        auto gd = ProcessModel::general_drift(DriftName::Linear, 0.7);
        auto ou = ProcessModel::ornstein_uhlenbeck(0.7);
        auto sols = shoot_bvp(gd, -0.8, 0.2, 1.0);
        REQUIRE(sols.size() == 1);
        auto closed = el_closed_form(ou, -0.8, 0.2, 1.0,
                                     static_cast<int>(sols[0].positions.size()));
        CHECK(sup_distance_on_shared_grid(sols[0], closed) <= 1e-6);
    }
    SUBCASE("spin flip against the closed form, both gammas") {
        for (double gamma : {1.0, 1.5}) {
            auto sf = ProcessModel::spin_flip(gamma);
            auto sols = shoot_bvp(sf, 0.5, -0.2, 1.2);
            REQUIRE(!sols.empty());
            auto closed = el_closed_form(sf, 0.5, -0.2, 1.2,
                                         static_cast<int>(sols[0].positions.size()));
            double best = 1e300;
            for (const auto& s : sols)
                best = std::min(best, sup_distance_on_shared_grid(s, closed));
            CHECK(best <= 1e-6);
        }
    }
    SUBCASE("no solution when the scan range cannot reach") {
        ShootConfig tight;
        tight.e_max = 1e-6;
        CHECK_THROWS_AS(shoot_bvp(ProcessModel::brownian(), 0.0, 50.0, 0.1, tight),
                        NoSolutionError);
    }
}

TEST_CASE("OU field closed form matches the sinh interpolation formula") {
    double kappa = 0.7, field = 0.1, T = 3.0;
    auto m = ProcessModel::ou_field(kappa, field);
    oracles::Draw draw(7);
    for (int k = 0; k < 30; ++k) {
        double g0 = draw.uniform(-2.5, 2.5);
        double b = draw.uniform(-2.5, 2.5);
        auto traj = el_closed_form(m, g0, b, T, 301);
        double ek = field / kappa;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double t = traj.times[i];
            double expect = (b - ek) * std::sinh(kappa * t) / std::sinh(kappa * T) +
                            (g0 - ek) * std::sinh(kappa * (T - t)) / std::sinh(kappa * T) +
                            ek;
            CHECK(traj.positions[i] == doctest::Approx(expect).epsilon(1e-11));
        }
    }
}

TEST_CASE("spin-flip energy relations") {
    SUBCASE("zero energy means zero momentum and zero start") {
        auto [minus, plus] = spinflip_energy_relations(0.0, 1.0);
        CHECK(minus.x0 == 0.0);
        CHECK(minus.p0 == 0.0);
        CHECK(plus.x0 == 0.0);
    }
    SUBCASE("starting pair shoots back to 0 at T") {
        auto sf = ProcessModel::spin_flip(1.0);
        for (double E : {0.01, 0.05}) {
            auto [minus, plus] = spinflip_energy_relations(E, 1.0);
            CHECK(minus.x0 == doctest::Approx(-plus.x0).epsilon(1e-12));
            for (const auto& leg : {minus, plus}) {
                auto traj = hamilton_flow(sf, leg.x0, leg.p0, 1.0, 2e-4);
                REQUIRE(!traj.exited_state_space);
                CHECK(std::abs(traj.positions.back()) <= 1e-6);
                CHECK(traj.energy == doctest::Approx(E).epsilon(1e-10));
            }
        }
    }
    SUBCASE("tanh(p/2) e^{-2t} is constant along symmetric flows") {
        auto sf = ProcessModel::spin_flip(1.0);
        auto [minus, plus] = spinflip_energy_relations(0.08, 0.9);
        auto traj = hamilton_flow(sf, minus.x0, minus.p0, 0.9, 1e-4);
        double c0 = std::tanh(traj.momenta[0] / 2.0);
        for (std::size_t i = 0; i < traj.times.size(); i += 101) {
            double c = std::tanh(traj.momenta[i] / 2.0) * std::exp(-2.0 * traj.times[i]);
            CHECK(c == doctest::Approx(c0).epsilon(1e-7));
        }
    }
    SUBCASE("domain error when the energy pushes x0 out of [-1,1]") {
        CHECK_THROWS_AS(spinflip_energy_relations(3.0, 2.0), DomainError);
    }
}

TEST_CASE("spin-flip field constants") {
    // at E=0 the offset equals the zero-energy limit (gamma-1)/(gamma+1)
    for (double gamma : {1.2, 1.5, 2.0}) {
        CHECK(spinflip_field_offset(gamma, 0.0) ==
              doctest::Approx((gamma - 1.0) / (gamma + 1.0)).epsilon(1e-13));
    }
    // at gamma=1 the offset vanishes for every energy
    for (double E : {-0.5, 0.0, 0.3, 2.0})
        CHECK(spinflip_field_offset(1.0, E) == 0.0);
}

TEST_CASE("Euler-Lagrange residual x'' = f f' on diffusion closed forms") {
    // OU: f = kappa x, so x'' = kappa^2 x
    double kappa = 1.1;
    auto ou = ProcessModel::ornstein_uhlenbeck(kappa);
    auto traj = el_closed_form(ou, 1.5, -0.2, 2.0, 4001);
    double h = traj.times[1] - traj.times[0];
    for (std::size_t i = 100; i + 100 < traj.positions.size(); i += 333) {
        double xdd = (traj.positions[i + 1] - 2.0 * traj.positions[i] +
                      traj.positions[i - 1]) /
                     (h * h);
        CHECK(xdd == doctest::Approx(kappa * kappa * traj.positions[i]).epsilon(1e-5));
    }
}

TEST_CASE("action integral from stored samples") {
    SUBCASE("Brownian line") {
        auto traj = el_closed_form(ProcessModel::brownian(), 2.0, 0.0, 1.0, 2001);
        CHECK(action_integral(ProcessModel::brownian(), traj) ==
              doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("momenta absent: central differences fallback") {
        auto traj = el_closed_form(ProcessModel::brownian(), 2.0, 0.0, 1.0, 2001);
        traj.momenta.clear();
        CHECK(action_integral(ProcessModel::brownian(), traj) ==
              doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("zero-energy spin-flip path has zero action") {
        auto sf = ProcessModel::spin_flip(1.5);
        double x0 = 0.37;
        double xT = x0 * std::exp(-2.5 * 0.8) +
                    0.5 / 2.5 * (1.0 - std::exp(-2.5 * 0.8));
        auto traj = el_closed_form(sf, x0, xT, 0.8, 801);
        CHECK(std::abs(traj.action) <= 1e-10);
        CHECK(std::abs(action_integral(sf, traj)) <= 1e-10);
    }
}

TEST_CASE("terminal condition tolerance") {
    oracles::Draw draw(29);
    std::vector<ProcessModel> models = {
        ProcessModel::brownian(), ProcessModel::brownian_drift(0.3),
        ProcessModel::ornstein_uhlenbeck(0.7), ProcessModel::ou_field(0.7, 0.1),
        ProcessModel::birth_death(1.0, 1.0)};
    for (const auto& m : models) {
        for (int k = 0; k < 20; ++k) {
            double g0 = draw.uniform(-2.0, 2.0);
            double b = draw.uniform(-2.0, 2.0);
            double T = draw.uniform(0.2, 3.0);
            auto traj = el_closed_form(m, g0, b, T, 101);
            CHECK(std::abs(traj.positions.back() - b) <= 1e-9);
            CHECK(traj.action >= -1e-12);
        }
    }
    for (int k = 0; k < 20; ++k) {
        auto sf = ProcessModel::spin_flip(draw.uniform(1.0, 1.8));
        double g0 = draw.uniform(-0.7, 0.7);
        double b = draw.uniform(-0.7, 0.7);
        auto traj = el_closed_form(sf, g0, b, draw.uniform(0.3, 2.0), 101);
        REQUIRE(!traj.exited_state_space);
        CHECK(std::abs(traj.positions.back() - b) <= 1e-9);
        CHECK(traj.action >= -1e-12);
    }
}

TEST_CASE("unsupported and invalid inputs") {
    CHECK_THROWS_AS(
        el_closed_form(ProcessModel::general_drift(DriftName::Cubic, 1.0), 0.0, 1.0, 1.0),
        UnsupportedModelError);
    CHECK_THROWS_AS(el_closed_form(ProcessModel::spin_flip(1.0), -2.0, 0.0, 1.0),
                    DomainError);
    CHECK_THROWS_AS(hamilton_flow(ProcessModel::brownian(), 0.0, 1.0, 1.0, 0.0),
                    DomainError);
}
