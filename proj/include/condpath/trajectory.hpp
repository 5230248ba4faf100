#ifndef CONDPATH_TRAJECTORY_HPP
#define CONDPATH_TRAJECTORY_HPP

#include <optional>
#include <string>
#include <vector>

#include "condpath/process_model.hpp"
#include "condpath/rate_function.hpp"

namespace condpath {

// A sampled extremal path on [0, T]. action is the path cost int L dt,
// excluding the starting-point cost i(gamma_0); total_cost adds it once a
// rate function is attached.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> momenta;  // empty when unknown
    double energy = 0.0;          // H along the path
    double start = 0.0;
    double terminal = 0.0;
    double action = 0.0;
    std::optional<double> total_cost;
    std::string provenance;         // closed_form:<family> | hamilton_flow | shooting
    bool exited_state_space = false;
    double energy_drift = 0.0;      // max |H(x_t,p_t) - H(x_0,p_0)| (flows)
};

// Unique extremal through (0, gamma0) and (T, b) for families with a closed
// form: linear for Brownian kinds and constant-rate birth-death, exponential
// interpolation for OU kinds, C1 e^{dt} + C2 e^{-dt} + C3 for spin flips.
// Throws UnsupportedModelError for GeneralDrift (use shoot_bvp).
Trajectory el_closed_form(const ProcessModel& m, double gamma0, double b,
                          double T, int grid_size = 1001);

// Fixed-step RK4 integration of Hamilton's equations. Spin-flip flows that
// leave [-1,1] stop early with exited_state_space set.
Trajectory hamilton_flow(const ProcessModel& m, double x0, double p0,
                         double T, double step);

struct ShootConfig {
    double e_max = 50.0;        // scan range from H(x0, p) = e_max
    int starts = 41;
    double step = 0.0;          // 0 = T / 2000
    double terminal_tol = 1e-7;
};

// All extremals from gamma0 hitting b at time T, found by a deterministic
// multi-start scan over p0, sorted by initial momentum.
std::vector<Trajectory> shoot_bvp(const ProcessModel& m, double gamma0,
                                  double b, double T,
                                  const ShootConfig& cfg = {});

// Symmetric spin flip (gamma = 1): starting points compatible with energy E
// and horizon T under the terminal condition x_T = 0, with the initial
// momenta that shoot them home. Throws DomainError when |x0| >= 1.
struct SpinFlipStart {
    double x0 = 0.0;
    double p0 = 0.0;
};
std::pair<SpinFlipStart, SpinFlipStart> spinflip_energy_relations(double E, double T);

// log((2+E+sqrt((2+E)^2-4(1-x0^2)))/(2(1-x0))): the momentum branch with
// positive initial velocity (pairs with the x0 <= 0 starting point).
double spinflip_p0_plus_branch(double E, double x0);

// Offset C3 of the spin-flip-in-field solution C1 e^{dt} + C2 e^{-dt} + C3.
double spinflip_field_offset(double gamma, double E);

// Initial momentum of the closed-form extremal, skipping path sampling and
// action quadrature (profile derivatives call this in tight loops). NaN when
// the extremal leaves the state space.
double el_initial_momentum(const ProcessModel& m, double gamma0, double b, double T);

// Composite-Simpson action along a sampled trajectory; velocities come from
// the stored momenta via dH/dp when present, else central differences.
double action_integral(const ProcessModel& m, const Trajectory& traj);

// total_cost = action + i(start)
void attach_initial_cost(Trajectory& traj, const RateFunction& rate);

}  // namespace condpath

#endif
