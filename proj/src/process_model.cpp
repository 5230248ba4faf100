#include "condpath/process_model.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "condpath/errors.hpp"

namespace condpath {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ParseError(std::string(what) + " must be positive", 0);
}

}  // namespace

ProcessModel ProcessModel::brownian() {
    ProcessModel m;
    m.kind = ModelKind::Brownian;
    return m;
}

ProcessModel ProcessModel::brownian_drift(double v) {
    ProcessModel m;
    m.kind = ModelKind::BrownianDrift;
    m.drift_v = v;
    return m;
}

ProcessModel ProcessModel::ornstein_uhlenbeck(double kappa) {
    require_positive(kappa, "kappa");
    ProcessModel m;
    m.kind = ModelKind::OrnsteinUhlenbeck;
    m.kappa = kappa;
    return m;
}

ProcessModel ProcessModel::ou_field(double kappa, double field) {
    require_positive(kappa, "kappa");
    ProcessModel m;
    m.kind = ModelKind::OUField;
    m.kappa = kappa;
    m.field = field;
    return m;
}

ProcessModel ProcessModel::general_drift(DriftName name, double param) {
    ProcessModel m;
    m.kind = ModelKind::GeneralDrift;
    m.drift_name = name;
    m.drift_param = param;
    return m;
}

ProcessModel ProcessModel::birth_death(double birth, double death) {
    if (birth < 0.0 || death < 0.0)
        throw ParseError("birth/death rates must be nonnegative", 0);
    ProcessModel m;
    m.kind = ModelKind::BirthDeath;
    m.birth_rate = birth;
    m.death_rate = death;
    return m;
}

ProcessModel ProcessModel::spin_flip(double gamma) {
    require_positive(gamma, "gamma");
    ProcessModel m;
    m.kind = ModelKind::SpinFlip;
    m.gamma = gamma;
    return m;
}

bool ProcessModel::is_diffusion() const {
    switch (kind) {
        case ModelKind::Brownian:
        case ModelKind::BrownianDrift:
        case ModelKind::OrnsteinUhlenbeck:
        case ModelKind::OUField:
        case ModelKind::GeneralDrift:
            return true;
        default:
            return false;
    }
}

bool ProcessModel::is_birth_death() const {
    return kind == ModelKind::BirthDeath || kind == ModelKind::SpinFlip;
}

std::pair<double, double> ProcessModel::state_space() const {
    if (kind == ModelKind::SpinFlip) return {-1.0, 1.0};
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
}

bool ProcessModel::in_state_space(double x) const {
    auto [lo, hi] = state_space();
    return x >= lo && x <= hi;
}

double ProcessModel::drift(double x) const {
    switch (kind) {
        case ModelKind::Brownian:
            return 0.0;
        case ModelKind::BrownianDrift:
            return drift_v;
        case ModelKind::OrnsteinUhlenbeck:
            return -kappa * x;
        case ModelKind::OUField:
            return -kappa * x + field;
        case ModelKind::GeneralDrift:
            switch (drift_name) {
                case DriftName::Linear:
                    return -drift_param * x;
                case DriftName::Cubic:
                    return -(x * x * x - drift_param * drift_param * x);
            }
            return 0.0;
        default:
            throw UnsupportedModelError("drift undefined for birth-death kinds");
    }
}

double ProcessModel::drift_deriv(double x) const {
    switch (kind) {
        case ModelKind::Brownian:
        case ModelKind::BrownianDrift:
            return 0.0;
        case ModelKind::OrnsteinUhlenbeck:
        case ModelKind::OUField:
            return -kappa;
        case ModelKind::GeneralDrift:
            switch (drift_name) {
                case DriftName::Linear:
                    return -drift_param;
                case DriftName::Cubic:
                    return -(3.0 * x * x - drift_param * drift_param);
            }
            return 0.0;
        default:
            throw UnsupportedModelError("drift undefined for birth-death kinds");
    }
}

double ProcessModel::birth(double x) const {
    switch (kind) {
        case ModelKind::BirthDeath:
            return birth_rate;
        case ModelKind::SpinFlip:
            return gamma * (1.0 - x);
        default:
            throw UnsupportedModelError("birth rate undefined for diffusions");
    }
}

double ProcessModel::death(double x) const {
    switch (kind) {
        case ModelKind::BirthDeath:
            return death_rate;
        case ModelKind::SpinFlip:
            return 1.0 + x;
        default:
            throw UnsupportedModelError("death rate undefined for diffusions");
    }
}

double ProcessModel::birth_deriv(double) const {
    return kind == ModelKind::SpinFlip ? -gamma : 0.0;
}

double ProcessModel::death_deriv(double) const {
    return kind == ModelKind::SpinFlip ? 1.0 : 0.0;
}

double hamiltonian(const ProcessModel& m, double x, double p) {
    if (m.is_diffusion()) return m.drift(x) * p + 0.5 * p * p;
    return (std::exp(p) - 1.0) * m.birth(x) + (std::exp(-p) - 1.0) * m.death(x);
}

double momentum_for_velocity(const ProcessModel& m, double x, double v) {
    if (m.is_diffusion()) return v - m.drift(x);
    double b = m.birth(x), d = m.death(x);
    if (!(b > 0.0) || !(d > 0.0))
        throw DegenerateRateError("birth or death rate vanishes at x = " + std::to_string(x));
    // v = b e^p - d e^{-p}: quadratic in u = e^p with one positive root
    double u = (v + std::sqrt(v * v + 4.0 * b * d)) / (2.0 * b);
    return std::log(u);
}

double lagrangian(const ProcessModel& m, double x, double v) {
    if (m.is_diffusion()) {
        double r = v - m.drift(x);
        return 0.5 * r * r;
    }
    double p = momentum_for_velocity(m, x, v);
    return p * v - hamiltonian(m, x, p);
}

double zero_energy_drift(const ProcessModel& m, double x) {
    if (m.is_diffusion()) return m.drift(x);
    return m.birth(x) - m.death(x);
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

namespace {

double parse_double(const std::string& text, std::size_t pos_for_error) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing bytes");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + text + "'", pos_for_error);
    }
}

std::map<std::string, std::string> parse_kv(const std::string& body, std::size_t offset) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string item = body.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + item + "'", offset + pos);
        out[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// bd rates are named const<value>, e.g. const1 or const2.5
double parse_const_rate(const std::string& name, std::size_t pos) {
    if (name.rfind("const", 0) != 0)
        throw ParseError("unknown rate '" + name + "' (expected const<value>)", pos);
    return parse_double(name.substr(5), pos);
}

}  // namespace

ProcessModel parse_model(const std::string& text) {
    std::size_t colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    std::size_t body_at = colon == std::string::npos ? text.size() : colon + 1;

    if (head == "bm") {
        if (body.empty()) return ProcessModel::brownian();
        auto kv = parse_kv(body, body_at);
        if (!kv.count("V")) throw ParseError("bm takes V=", body_at);
        return ProcessModel::brownian_drift(parse_double(kv["V"], body_at));
    }
    if (head == "ou") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("kappa")) throw ParseError("ou needs kappa=", body_at);
        return ProcessModel::ornstein_uhlenbeck(parse_double(kv["kappa"], body_at));
    }
    if (head == "oufield") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("kappa") || !kv.count("E"))
            throw ParseError("oufield needs kappa= and E=", body_at);
        return ProcessModel::ou_field(parse_double(kv["kappa"], body_at),
                                      parse_double(kv["E"], body_at));
    }
    if (head == "gd") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("name")) throw ParseError("gd needs name=", body_at);
        if (kv["name"] == "linear")
            return ProcessModel::general_drift(
                DriftName::Linear, kv.count("k") ? parse_double(kv["k"], body_at) : 1.0);
        if (kv["name"] == "cubic")
            return ProcessModel::general_drift(
                DriftName::Cubic, kv.count("a") ? parse_double(kv["a"], body_at) : 1.0);
        throw ParseError("unknown drift '" + kv["name"] + "'", body_at);
    }
    if (head == "bd") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("b") || !kv.count("d"))
            throw ParseError("bd needs b= and d=", body_at);
        return ProcessModel::birth_death(parse_const_rate(kv["b"], body_at),
                                         parse_const_rate(kv["d"], body_at));
    }
    if (head == "spinflip") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("gamma")) throw ParseError("spinflip needs gamma=", body_at);
        return ProcessModel::spin_flip(parse_double(kv["gamma"], body_at));
    }
    throw ParseError("unknown model '" + head + "'", 0);
}

std::string format_model(const ProcessModel& m) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    switch (m.kind) {
        case ModelKind::Brownian:
            return "bm";
        case ModelKind::BrownianDrift:
            return "bm:V=" + num(m.drift_v);
        case ModelKind::OrnsteinUhlenbeck:
            return "ou:kappa=" + num(m.kappa);
        case ModelKind::OUField:
            return "oufield:kappa=" + num(m.kappa) + ",E=" + num(m.field);
        case ModelKind::GeneralDrift:
            if (m.drift_name == DriftName::Linear)
                return "gd:name=linear,k=" + num(m.drift_param);
            return "gd:name=cubic,a=" + num(m.drift_param);
        case ModelKind::BirthDeath:
            return "bd:b=const" + num(m.birth_rate) + ",d=const" + num(m.death_rate);
        case ModelKind::SpinFlip:
            return "spinflip:gamma=" + num(m.gamma);
    }
    return "";
}

}  // namespace condpath
