#ifndef CONDPATH_PROCESS_MODEL_HPP
#define CONDPATH_PROCESS_MODEL_HPP

#include <limits>
#include <string>
#include <utility>

namespace condpath {

// Small-noise process families. Diffusions carry their deterministic drift;
// birth-death kinds carry jump rates b(x), d(x) for +-1/N steps at rate N.
enum class ModelKind {
    Brownian,
    BrownianDrift,
    OrnsteinUhlenbeck,
    OUField,
    GeneralDrift,
    BirthDeath,
    SpinFlip
};

// Catalog of general drifts f(x) (process solves dX = -f(X) dt + noise).
// All members are odd and Lipschitz on compacts.
enum class DriftName {
    Linear,  // f(x) = k x            (Ornstein-Uhlenbeck when k = kappa)
    Cubic    // f(x) = x^3 - a^2 x    (double-well gradient)
};

struct ProcessModel {
    ModelKind kind = ModelKind::Brownian;
    double drift_v = 0.0;   // BrownianDrift
    double kappa = 1.0;     // OrnsteinUhlenbeck / OUField
    double field = 0.0;     // OUField
    DriftName drift_name = DriftName::Linear;  // GeneralDrift
    double drift_param = 1.0;                  // k or a of the catalog entry
    double birth_rate = 1.0;   // BirthDeath (constant rates)
    double death_rate = 1.0;   // BirthDeath
    double gamma = 1.0;        // SpinFlip bias; 1 = symmetric

    static ProcessModel brownian();
    static ProcessModel brownian_drift(double v);
    static ProcessModel ornstein_uhlenbeck(double kappa);
    static ProcessModel ou_field(double kappa, double field);
    static ProcessModel general_drift(DriftName name, double param);
    static ProcessModel birth_death(double birth, double death);
    static ProcessModel spin_flip(double gamma);

    bool is_diffusion() const;
    bool is_birth_death() const;   // BirthDeath or SpinFlip
    std::pair<double, double> state_space() const;  // [-1,1] for SpinFlip
    bool in_state_space(double x) const;

    // deterministic drift of the diffusion kinds (the negative of f)
    double drift(double x) const;
    double drift_deriv(double x) const;

    // jump rates of the birth-death kinds
    double birth(double x) const;
    double death(double x) const;
    double birth_deriv(double x) const;
    double death_deriv(double x) const;
};

// Feng-Kurtz Hamiltonian: drift(x) p + p^2/2 for diffusions,
// (e^p - 1) b(x) + (e^{-p} - 1) d(x) for birth-death kinds.
double hamiltonian(const ProcessModel& m, double x, double p);

// Legendre transform sup_p (p v - H). Closed form for diffusions; for
// birth-death kinds the stationary point solves a quadratic in e^p.
// Throws DegenerateRateError when b(x) or d(x) vanishes.
double lagrangian(const ProcessModel& m, double x, double v);

// Law-of-large-numbers velocity: drift(x) or b(x) - d(x).
double zero_energy_drift(const ProcessModel& m, double x);

// Initial momentum reproducing velocity v at state x, i.e. the maximizer in
// the Legendre transform (p = v - drift for diffusions, log of the positive
// quadratic root for birth-death kinds).
double momentum_for_velocity(const ProcessModel& m, double x, double v);

// Grammar: bm | bm:V=0.5 | ou:kappa=0.7 | oufield:kappa=0.7,E=0.1 |
//          gd:name=linear,k=0.7 | gd:name=cubic,a=2 |
//          bd:b=const1,d=const1 | spinflip:gamma=1
ProcessModel parse_model(const std::string& text);
std::string format_model(const ProcessModel& m);

}  // namespace condpath

#endif
