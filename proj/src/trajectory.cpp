#include "condpath/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"

namespace condpath {

namespace {

std::vector<double> uniform_times(double T, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = T * static_cast<double>(i) / (n - 1);
    t.back() = T;
    return t;
}

// dx/dt = dH/dp
double velocity_at(const ProcessModel& m, double x, double p) {
    if (m.is_diffusion()) return m.drift(x) + p;
    return m.birth(x) * std::exp(p) - m.death(x) * std::exp(-p);
}

// dp/dt = -dH/dx
double momentum_rate(const ProcessModel& m, double x, double p) {
    if (m.is_diffusion()) return -m.drift_deriv(x) * p;
    return -m.birth_deriv(x) * (std::exp(p) - 1.0) -
           m.death_deriv(x) * (std::exp(-p) - 1.0);
}

// ---- closed-form families -------------------------------------------------

Trajectory linear_trajectory(const ProcessModel& m, double gamma0, double b,
                             double T, int n, const char* provenance) {
    Trajectory traj;
    traj.provenance = provenance;
    traj.start = gamma0;
    traj.terminal = b;
    traj.times = uniform_times(T, n);
    traj.positions.resize(n);
    traj.momenta.resize(n);
    double v = (b - gamma0) / T;
    double p = momentum_for_velocity(m, gamma0, v);
    for (int i = 0; i < n; ++i) {
        traj.positions[i] = gamma0 + v * traj.times[i];
        traj.momenta[i] = p;
    }
    traj.energy = hamiltonian(m, gamma0, p);
    traj.action = T * lagrangian(m, gamma0, v);
    return traj;
}

Trajectory ou_trajectory(const ProcessModel& m, double gamma0, double b,
                         double T, int n) {
    double kappa = m.kappa;
    double offset = m.kind == ModelKind::OUField ? m.field / kappa : 0.0;
    double y0 = gamma0 - offset, yT = b - offset;
    double ekT = std::exp(kappa * T);
    double A = (y0 - yT * ekT) / (1.0 - ekT * ekT);
    double B = y0 - A;

    Trajectory traj;
    traj.provenance = m.kind == ModelKind::OUField ? "closed_form:ou_field"
                                                   : "closed_form:ou";
    traj.start = gamma0;
    traj.terminal = b;
    traj.times = uniform_times(T, n);
    traj.positions.resize(n);
    traj.momenta.resize(n);
    for (int i = 0; i < n; ++i) {
        double e = std::exp(kappa * traj.times[i]);
        traj.positions[i] = A * e + B / e + offset;
        traj.momenta[i] = 2.0 * kappa * A * e;  // p = y' + kappa y
    }
    traj.positions.back() = b;  // pin the terminal against rounding
    traj.energy = hamiltonian(m, gamma0, traj.momenta[0]);
    traj.action = kappa * A * A * (ekT * ekT - 1.0);
    return traj;
}

// Spin flip (any gamma): x(t) = C1 e^{dt} + C2 e^{-dt} + C3 with
// d = 1 + gamma and C3 = (gamma-1)(E+1+gamma)/d^2. The energy must satisfy
// a consistency equation which is quadratic in E; of its two roots exactly
// one reproduces itself as H(x0, p0).
struct SpinFlipForm {
    double c1, c2, c3, delta, energy;
};

SpinFlipForm solve_spinflip_form(const ProcessModel& m, double gamma0,
                                 double b, double T) {
    double g = m.gamma;
    double delta = 1.0 + g;
    double eT = std::exp(delta * T), emT = 1.0 / eT;

    auto coefs = [&](double E) {
        double c3 = spinflip_field_offset(g, E);
        double c1 = ((b - c3) - (gamma0 - c3) * emT) / (eT - emT);
        double c2 = ((gamma0 - c3) * eT - (b - c3)) / (eT - emT);
        return std::array<double, 3>{c1, c2, c3};
    };
    auto consistency = [&](double E) {
        auto [c1, c2, c3] = coefs(E);
        return delta * delta * (c3 * c3 - 4.0 * c1 * c2) -
               (E * E + 2.0 * E * (1.0 + g) + (g - 1.0) * (g - 1.0));
    };
    // quadratic in E; recover coefficients by interpolation at -1, 0, 1
    double f0 = consistency(0.0), f1 = consistency(1.0), fm = consistency(-1.0);
    double a2 = 0.5 * (f1 + fm) - f0;
    double a1 = 0.5 * (f1 - fm);
    double a0 = f0;

    std::vector<double> roots;
    if (std::abs(a2) < 1e-14 * std::max({std::abs(a0), std::abs(a1), 1.0})) {
        if (a1 != 0.0) roots.push_back(-a0 / a1);
    } else {
        double disc = a1 * a1 - 4.0 * a2 * a0;
        if (disc >= 0.0) {
            double s = std::sqrt(disc);
            roots.push_back((-a1 + s) / (2.0 * a2));
            roots.push_back((-a1 - s) / (2.0 * a2));
        }
    }

    bool found = false;
    SpinFlipForm chosen{};
    double best_err = 1e-6;
    for (double E : roots) {
        auto [c1, c2, c3] = coefs(E);
        double v0 = delta * (c1 - c2);
        double x0 = c1 + c2 + c3;
        if (std::abs(x0) >= 1.0) continue;
        double p0;
        try {
            p0 = momentum_for_velocity(m, x0, v0);
        } catch (const DegenerateRateError&) {
            continue;
        }
        double err = std::abs(hamiltonian(m, x0, p0) - E) / std::max(1.0, std::abs(E));
        if (err < best_err) {
            best_err = err;
            chosen = {c1, c2, c3, delta, E};
            found = true;
        }
    }
    if (!found)
        throw NoSolutionError("no self-consistent spin-flip extremal through the endpoints");
    return chosen;
}

Trajectory spinflip_trajectory(const ProcessModel& m, double gamma0, double b,
                               double T, int n) {
    SpinFlipForm f = solve_spinflip_form(m, gamma0, b, T);

    Trajectory traj;
    traj.provenance = m.gamma == 1.0 ? "closed_form:spinflip"
                                     : "closed_form:spinflip_field";
    traj.start = gamma0;
    traj.terminal = b;
    traj.energy = f.energy;
    traj.times = uniform_times(T, n);
    traj.positions.resize(n);

    auto x_of = [&](double t) {
        return f.c1 * std::exp(f.delta * t) + f.c2 * std::exp(-f.delta * t) + f.c3;
    };
    auto v_of = [&](double t) {
        return f.delta * (f.c1 * std::exp(f.delta * t) - f.c2 * std::exp(-f.delta * t));
    };

    bool exited = false;
    for (int i = 0; i < n; ++i) {
        traj.positions[i] = x_of(traj.times[i]);
        if (std::abs(traj.positions[i]) >= 1.0) exited = true;
    }
    traj.positions.back() = b;
    if (exited) {
        traj.exited_state_space = true;
        traj.action = std::numeric_limits<double>::quiet_NaN();
        return traj;
    }
    traj.momenta.resize(n);
    for (int i = 0; i < n; ++i)
        traj.momenta[i] =
            momentum_for_velocity(m, traj.positions[i], v_of(traj.times[i]));
    traj.action = simpson_refine(
        [&](double t) { return lagrangian(m, x_of(t), v_of(t)); }, 0.0, T, 1e-12);
    return traj;
}

}  // namespace

double spinflip_field_offset(double gamma, double E) {
    double delta = 1.0 + gamma;
    return (gamma - 1.0) * (E + 1.0 + gamma) / (delta * delta);
}

double el_initial_momentum(const ProcessModel& m, double gamma0, double b, double T) {
    switch (m.kind) {
        case ModelKind::Brownian:
        case ModelKind::BrownianDrift:
        case ModelKind::BirthDeath:
            return momentum_for_velocity(m, gamma0, (b - gamma0) / T);
        case ModelKind::OrnsteinUhlenbeck:
        case ModelKind::OUField: {
            double offset = m.kind == ModelKind::OUField ? m.field / m.kappa : 0.0;
            double ekT = std::exp(m.kappa * T);
            double A = ((gamma0 - offset) - (b - offset) * ekT) / (1.0 - ekT * ekT);
            return 2.0 * m.kappa * A;
        }
        case ModelKind::SpinFlip: {
            try {
                SpinFlipForm f = solve_spinflip_form(m, gamma0, b, T);
                double v0 = f.delta * (f.c1 - f.c2);
                double x0 = f.c1 + f.c2 + f.c3;
                if (std::abs(x0) >= 1.0)
                    return std::numeric_limits<double>::quiet_NaN();
                return momentum_for_velocity(m, x0, v0);
            } catch (const Error&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        }
        default:
            throw UnsupportedModelError("no closed-form momentum for this model");
    }
}

Trajectory el_closed_form(const ProcessModel& m, double gamma0, double b,
                          double T, int grid_size) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    if (grid_size < 2) grid_size = 2;
    if (!m.in_state_space(gamma0) || !m.in_state_space(b))
        throw DomainError("endpoint outside the state space");
    switch (m.kind) {
        case ModelKind::Brownian:
        case ModelKind::BrownianDrift:
            return linear_trajectory(m, gamma0, b, T, grid_size,
                                     "closed_form:brownian");
        case ModelKind::OrnsteinUhlenbeck:
        case ModelKind::OUField:
            return ou_trajectory(m, gamma0, b, T, grid_size);
        case ModelKind::BirthDeath:
            return linear_trajectory(m, gamma0, b, T, grid_size,
                                     "closed_form:birth_death_const");
        case ModelKind::SpinFlip:
            return spinflip_trajectory(m, gamma0, b, T, grid_size);
        case ModelKind::GeneralDrift:
            throw UnsupportedModelError(
                "no closed form for general drifts; use shoot_bvp");
    }
    throw UnsupportedModelError("unknown model kind");
}

Trajectory hamilton_flow(const ProcessModel& m, double x0, double p0,
                         double T, double step) {
    if (!(step > 0.0)) throw DomainError("step must be positive");
    if (!m.in_state_space(x0)) throw DomainError("x0 outside the state space");

    long n_steps = std::max(1L, static_cast<long>(std::ceil(T / step)));
    double h = T / static_cast<double>(n_steps);

    Trajectory traj;
    traj.provenance = "hamilton_flow";
    traj.start = x0;
    traj.energy = hamiltonian(m, x0, p0);
    traj.times.reserve(n_steps + 1);
    traj.positions.reserve(n_steps + 1);
    traj.momenta.reserve(n_steps + 1);
    traj.times.push_back(0.0);
    traj.positions.push_back(x0);
    traj.momenta.push_back(p0);

    auto [lo, hi] = m.state_space();
    double x = x0, p = p0;
    for (long i = 0; i < n_steps; ++i) {
        double k1x = velocity_at(m, x, p), k1p = momentum_rate(m, x, p);
        double k2x = velocity_at(m, x + 0.5 * h * k1x, p + 0.5 * h * k1p);
        double k2p = momentum_rate(m, x + 0.5 * h * k1x, p + 0.5 * h * k1p);
        double k3x = velocity_at(m, x + 0.5 * h * k2x, p + 0.5 * h * k2p);
        double k3p = momentum_rate(m, x + 0.5 * h * k2x, p + 0.5 * h * k2p);
        double k4x = velocity_at(m, x + h * k3x, p + h * k3p);
        double k4p = momentum_rate(m, x + h * k3x, p + h * k3p);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        // p blows up in finite time for the exponential Hamiltonians; a
        // non-finite state counts as leaving every compact region
        if (x < lo || x > hi || !std::isfinite(x) || !std::isfinite(p)) {
            traj.exited_state_space = true;
            break;
        }
        traj.times.push_back(h * static_cast<double>(i + 1));
        traj.positions.push_back(x);
        traj.momenta.push_back(p);
        traj.energy_drift = std::max(
            traj.energy_drift, std::abs(hamiltonian(m, x, p) - traj.energy));
    }
    traj.terminal = traj.positions.back();
    if (!traj.exited_state_space) traj.times.back() = T;
    return traj;
}

namespace {

// scan endpoints from H(x0, p) = e_max (H is convex in p with H -> inf)
std::pair<double, double> momentum_scan_range(const ProcessModel& m, double x0,
                                              double e_max) {
    if (m.is_diffusion()) {
        double dr = m.drift(x0);
        double s = std::sqrt(dr * dr + 2.0 * e_max);
        return {-dr - s, -dr + s};
    }
    auto level = [&](double sign) {
        double p = sign;
        while (hamiltonian(m, x0, p) < e_max && std::abs(p) < 700.0) p *= 2.0;
        double lo = 0.0, hi = p;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            (hamiltonian(m, x0, mid) < e_max ? lo : hi) = mid;
        }
        return hi;
    };
    return {level(-1.0), level(1.0)};
}

}  // namespace

std::vector<Trajectory> shoot_bvp(const ProcessModel& m, double gamma0,
                                  double b, double T, const ShootConfig& cfg) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    double step = cfg.step > 0.0 ? cfg.step : T / 2000.0;
    auto [p_lo, p_hi] = momentum_scan_range(m, gamma0, cfg.e_max);

    auto miss = [&](double p0) {
        Trajectory t = hamilton_flow(m, gamma0, p0, T, step);
        if (t.exited_state_space) {
            // overshoot direction keeps the bracket scan usable
            return t.positions.back() > 0.0 ? 1e6 : -1e6;
        }
        return t.positions.back() - b;
    };

    int n = std::max(cfg.starts, 3);
    std::vector<double> p_roots;
    double prev_p = p_lo, prev_m = miss(p_lo);
    for (int i = 1; i < n; ++i) {
        double p = p_lo + (p_hi - p_lo) * static_cast<double>(i) / (n - 1);
        double fm = miss(p);
        if (prev_m == 0.0)
            p_roots.push_back(prev_p);
        else if (fm != 0.0 && prev_m * fm < 0.0)
            p_roots.push_back(find_root(miss, prev_p, p, 1e-13));
        prev_p = p;
        prev_m = fm;
    }
    if (prev_m == 0.0) p_roots.push_back(prev_p);

    std::sort(p_roots.begin(), p_roots.end());
    std::vector<Trajectory> solutions;
    for (double p0 : p_roots) {
        if (!solutions.empty() &&
            std::abs(p0 - solutions.back().momenta.front()) <
                1e-8 * std::max(1.0, std::abs(p0)))
            continue;
        Trajectory t = hamilton_flow(m, gamma0, p0, T, step);
        if (t.exited_state_space) continue;
        if (std::abs(t.positions.back() - b) > cfg.terminal_tol) continue;
        t.provenance = "shooting";
        t.terminal = t.positions.back();
        t.action = action_integral(m, t);
        solutions.push_back(std::move(t));
    }
    if (solutions.empty())
        throw NoSolutionError("shooting found no extremal hitting the terminal point");
    return solutions;
}

double spinflip_p0_plus_branch(double E, double x0) {
    if (std::abs(x0) >= 1.0) throw DomainError("|x0| >= 1");
    double q = (2.0 + E) * (2.0 + E) - 4.0 * (1.0 - x0 * x0);
    if (q < 0.0) throw DomainError("energy too small for this starting point");
    return std::log((2.0 + E + std::sqrt(q)) / (2.0 * (1.0 - x0)));
}

std::pair<SpinFlipStart, SpinFlipStart> spinflip_energy_relations(double E, double T) {
    if (E < 0.0) throw DomainError("energy must be nonnegative");
    double magnitude =
        std::sqrt(E / 4.0 * (1.0 + E / 4.0)) * (std::exp(2.0 * T) - std::exp(-2.0 * T));
    if (magnitude >= 1.0)
        throw DomainError("energy " + std::to_string(E) +
                          " pushes the starting point outside [-1,1]");
    SpinFlipStart minus{-magnitude, spinflip_p0_plus_branch(E, -magnitude)};
    SpinFlipStart plus{magnitude, -minus.p0};
    return {minus, plus};
}

double action_integral(const ProcessModel& m, const Trajectory& traj) {
    std::size_t n = traj.positions.size();
    if (n < 2) return 0.0;
    double dt = traj.times[1] - traj.times[0];

    std::vector<double> lvals(n);
    if (!traj.momenta.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = velocity_at(m, traj.positions[i], traj.momenta[i]);
            lvals[i] = lagrangian(m, traj.positions[i], v);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double v;
            if (i == 0)
                v = (traj.positions[1] - traj.positions[0]) / dt;
            else if (i == n - 1)
                v = (traj.positions[n - 1] - traj.positions[n - 2]) / dt;
            else
                v = (traj.positions[i + 1] - traj.positions[i - 1]) / (2.0 * dt);
            lvals[i] = lagrangian(m, traj.positions[i], v);
        }
    }
    return simpson_uniform(lvals, dt);
}

void attach_initial_cost(Trajectory& traj, const RateFunction& rate) {
    traj.total_cost = traj.action + eval_i(rate, traj.start);
}

}  // namespace condpath
