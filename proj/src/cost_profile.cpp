#include "condpath/cost_profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"
#include "condpath/parallel.hpp"
#include "condpath/trajectory.hpp"

namespace condpath {

namespace {

constexpr double kValueTieTol = 1e-9;
constexpr double kSymmetryTol = 1e-8;

// Brownian/OU families: path cost is q (A - c)^2.
struct QuadraticForm {
    double q, c;
};

std::optional<QuadraticForm> quadratic_form(const ProcessModel& m, double b,
                                            double T) {
    switch (m.kind) {
        case ModelKind::Brownian:
            return QuadraticForm{1.0 / (2.0 * T), b};
        case ModelKind::BrownianDrift:
            return QuadraticForm{1.0 / (2.0 * T), b - m.drift_v * T};
        case ModelKind::OrnsteinUhlenbeck: {
            double e2 = std::exp(2.0 * m.kappa * T);
            return QuadraticForm{m.kappa / (e2 - 1.0), b * std::exp(m.kappa * T)};
        }
        case ModelKind::OUField: {
            double e2 = std::exp(2.0 * m.kappa * T);
            double shift = m.field / m.kappa;
            return QuadraticForm{m.kappa / (e2 - 1.0),
                                 (b - shift) * std::exp(m.kappa * T) + shift};
        }
        default:
            return std::nullopt;
    }
}

ShootConfig general_drift_shoot_config(const ProcessModel& m, double A,
                                       double b, double T) {
    ShootConfig cfg;
    double rough = 2.0 * std::abs(b - A) / T + std::abs(m.drift(A)) +
                   std::abs(m.drift(b)) + 2.0;
    cfg.e_max = 0.5 * rough * rough + std::abs(m.drift(A)) * rough + 5.0;
    return cfg;
}

// Initial momentum of the cost-minimizing extremal from A; the profile
// derivative is i'(A) - p0(A).
double initial_momentum(const ProcessModel& m, double A, double b, double T) {
    if (auto qf = quadratic_form(m, b, T)) {
        // dS/dA = 2 q (A - c) = -p0
        return -2.0 * qf->q * (A - qf->c);
    }
    switch (m.kind) {
        case ModelKind::BirthDeath:
            return momentum_for_velocity(m, A, (b - A) / T);
        case ModelKind::SpinFlip:
            return el_initial_momentum(m, A, b, T);
        case ModelKind::GeneralDrift: {
            auto sols = shoot_bvp(m, A, b, T, general_drift_shoot_config(m, A, b, T));
            const Trajectory* best = &sols.front();
            for (const auto& s : sols)
                if (s.action < best->action) best = &s;
            return best->momenta.front();
        }
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

bool profile_is_polynomial(const ProcessModel& m, const RateFunction& rate) {
    return rate.is_polynomial() && quadratic_form(m, 0.0, 1.0).has_value();
}

// E'(A) as polynomial coefficients: i'(A) + 2q(A - c).
std::vector<double> profile_derivative_coeffs(const RateFunction& rate,
                                              const QuadraticForm& qf) {
    std::vector<double> d = poly::derivative(rate.as_coefficients());
    if (d.size() < 2) d.resize(2, 0.0);
    d[0] += -2.0 * qf.q * qf.c;
    d[1] += 2.0 * qf.q;
    return poly::trimmed(d);
}

void require_coercive(const RateFunction& rate, const QuadraticForm& qf) {
    std::vector<double> full = rate.as_coefficients();
    if (full.size() < 3) full.resize(3, 0.0);
    full[2] += qf.q;
    full = poly::trimmed(full);
    int deg = poly::degree(full);
    if (deg < 2 || deg % 2 != 0 || full.back() <= 0.0)
        throw DomainError("non-coercive cost profile: no global minimizer exists");
}

}  // namespace

double path_cost_closed_form(const ProcessModel& m, double A, double b, double T) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    if (auto qf = quadratic_form(m, b, T)) {
        double d = A - qf->c;
        return qf->q * d * d;
    }
    switch (m.kind) {
        case ModelKind::BirthDeath:
        case ModelKind::SpinFlip:
            return el_closed_form(m, A, b, T, 65).action;
        case ModelKind::GeneralDrift: {
            auto sols = shoot_bvp(m, A, b, T, general_drift_shoot_config(m, A, b, T));
            double best = sols.front().action;
            for (const auto& s : sols) best = std::min(best, s.action);
            return best;
        }
        default:
            throw UnsupportedModelError("no path cost for this model kind");
    }
}

double total_cost_at(const ProcessModel& m, const RateFunction& rate,
                     double A, double b, double T) {
    return eval_i(rate, A) + path_cost_closed_form(m, A, b, T);
}

GridSpec default_grid(const ProcessModel& m, const RateFunction& rate, double b) {
    GridSpec g;
    if (m.kind == ModelKind::SpinFlip) {
        g.lo = -1.0 + 1e-6;
        g.hi = 1.0 - 1e-6;
        return g;
    }
    if (m.kind == ModelKind::GeneralDrift) g.n = 201;
    switch (rate.kind) {
        case RateKind::Quartic:
        case RateKind::TiltedQuartic:
            g.hi = 3.0 * rate.a + std::abs(b);
            break;
        case RateKind::Quadratic:
            g.hi = std::abs(rate.center) + 3.0 / std::sqrt(rate.curvature) + std::abs(b);
            break;
        case RateKind::OscillatoryIntegral:
            g.hi = 3.0 + std::abs(b);
            break;
        case RateKind::Sextic:
        case RateKind::Polynomial: {
            double span = 1.0;
            for (const auto& mn : minima_of_i(rate))
                span = std::max(span, std::abs(mn.location));
            g.hi = span + 2.0 + std::abs(b);
            break;
        }
    }
    g.lo = -g.hi;
    return g;
}

std::vector<StationaryPoint> profile_stationary_points(
    const ProcessModel& m, const RateFunction& rate, double b, double T,
    std::optional<GridSpec> range) {
    GridSpec gs = range ? *range : default_grid(m, rate, b);
    auto qf = quadratic_form(m, b, T);

    std::vector<double> locations;
    std::function<double(double)> second_deriv;
    if (profile_is_polynomial(m, rate)) {
        require_coercive(rate, *qf);
        std::vector<double> dcoef = profile_derivative_coeffs(rate, *qf);
        locations = poly::degree(dcoef) == 3
                        ? poly::cubic_real_roots(dcoef[3], dcoef[2], dcoef[1], dcoef[0])
                        : poly::real_roots(dcoef);
        std::vector<double> ddcoef = poly::derivative(dcoef);
        second_deriv = [ddcoef](double A) { return poly::eval(ddcoef, A); };
    } else {
        auto dprofile = [&, qf](double A) {
            if (qf) return deriv_i(rate, A) + 2.0 * qf->q * (A - qf->c);
            return deriv_i(rate, A) - initial_momentum(m, A, b, T);
        };
        // uniform probes plus a log-spaced cluster near the origin, where
        // freshly bifurcated minimizers sit far below the grid resolution
        std::vector<double> probes;
        probes.reserve(2001 + 129);
        for (int i = 0; i < 2001; ++i)
            probes.push_back(gs.lo + (gs.hi - gs.lo) * static_cast<double>(i) / 2000.0);
        double span = gs.hi - gs.lo;
        for (int k = 0; k <= 63; ++k) {
            double a = span * std::pow(10.0, -9.0 + 6.0 * static_cast<double>(k) / 63.0);
            if (-a > gs.lo) probes.push_back(-a);
            if (a < gs.hi) probes.push_back(a);
        }
        if (gs.lo < 0.0 && gs.hi > 0.0) probes.push_back(0.0);
        std::sort(probes.begin(), probes.end());
        locations = scan_roots_at(dprofile, probes, 1e-12);
        double h = 1e-5 * std::max(1.0, gs.hi - gs.lo);
        second_deriv = [dprofile, h](double A) {
            return (dprofile(A + h) - dprofile(A - h)) / (2.0 * h);
        };
    }

    std::vector<StationaryPoint> points;
    for (double A : locations) {
        StationaryPoint sp;
        sp.location = A;
        sp.value = total_cost_at(m, rate, A, b, T);
        if (std::isnan(sp.value)) continue;
        double dd = second_deriv(A);
        double scale = std::max(1.0, std::abs(A));
        if (dd > 1e-7 * scale)
            sp.kind = StationaryKind::Minimum;
        else if (dd < -1e-7 * scale)
            sp.kind = StationaryKind::Maximum;
        else
            sp.kind = StationaryKind::SaddleOrInflection;
        points.push_back(sp);
    }
    std::sort(points.begin(), points.end(),
              [](const StationaryPoint& a, const StationaryPoint& b) {
                  return a.location < b.location;
              });
    return points;
}

std::vector<double> tied_global_minimizers(const std::vector<StationaryPoint>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sp : pts)
        if (sp.kind == StationaryKind::Minimum) best = std::min(best, sp.value);
    std::vector<double> out;
    for (const auto& sp : pts)
        if (sp.kind == StationaryKind::Minimum && sp.value <= best + kValueTieTol)
            out.push_back(sp.location);
    return out;
}

CostProfile build_profile(const ProcessModel& m, const RateFunction& rate,
                          double b, double T, std::optional<GridSpec> grid_in,
                          unsigned threads) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    GridSpec gs = grid_in ? *grid_in : default_grid(m, rate, b);

    CostProfile profile;
    profile.model = m;
    profile.rate = rate;
    profile.b = b;
    profile.T = T;

    if ((m.kind == ModelKind::Brownian || m.kind == ModelKind::BrownianDrift) &&
        (rate.kind == RateKind::Quartic || rate.kind == RateKind::TiltedQuartic))
        profile.alpha = 1.0 / (2.0 * T) - 2.0 * rate.a * rate.a;

    profile.grid.resize(gs.n);
    profile.values.resize(gs.n);
    for (int i = 0; i < gs.n; ++i)
        profile.grid[i] = gs.lo + (gs.hi - gs.lo) * static_cast<double>(i) / (gs.n - 1);
    parallel_for(gs.n, threads, [&](std::size_t i) {
        profile.values[i] = total_cost_at(m, rate, profile.grid[i], b, T);
    });

    profile.stationary_points = profile_stationary_points(m, rate, b, T, gs);
    profile.global_minimizers = tied_global_minimizers(profile.stationary_points);
    return profile;
}

double equal_height_gap(const CostProfile& profile) {
    std::vector<StationaryPoint> minima;
    for (const auto& sp : profile.stationary_points)
        if (sp.kind == StationaryKind::Minimum) minima.push_back(sp);
    if (minima.size() < 2)
        throw FewMinimaError("equal_height_gap needs at least two local minima, found " +
                             std::to_string(minima.size()));
    std::sort(minima.begin(), minima.end(),
              [](const StationaryPoint& a, const StationaryPoint& b) {
                  return a.value < b.value;
              });
    const StationaryPoint* lower = &minima[0];
    const StationaryPoint* upper = &minima[1];
    if (lower->location > upper->location) std::swap(lower, upper);
    return lower->value - upper->value;
}

ConditionalLimitPrediction predict_conditional_limit(const CostProfile& profile) {
    ConditionalLimitPrediction pred;
    pred.locations = profile.global_minimizers;
    if (pred.locations.size() == 1) {
        pred.kind = PredictionKind::PointMass;
        pred.weights = {1.0};
        return pred;
    }
    if (pred.locations.size() == 2 &&
        std::abs(pred.locations[0] + pred.locations[1]) <= kSymmetryTol) {
        pred.kind = PredictionKind::SymmetricPair;
        pred.weights = {0.5, 0.5};
        return pred;
    }
    pred.kind = PredictionKind::Multi;  // weights undetermined by the LDP
    return pred;
}

std::optional<double> short_time_uniqueness_bound(const RateFunction& rate) {
    auto d = curvature_lower_bound(rate);
    if (!d) return std::nullopt;         // unbounded below: no bound exists
    if (*d >= 0.0) return std::nullopt;  // convex: always unique
    return -1.0 / *d;
}

}  // namespace condpath
