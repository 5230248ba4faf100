#include "condpath/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"

namespace condpath {

namespace {

const std::vector<double> kSexticDefault = {40.0, 0.0, -42.0, 38.0, 9.0, -24.0, 7.0};

// ---- oscillatory integral i(x) = int_0^{|x|} u cos^2(1/u) du --------------
//
// The integrand oscillates essentially as u -> 0. We subdivide at the zeros
// of cos(1/u), u_k = 2/((2k+1) pi), apply Gauss per hump, and replace the
// remaining [0, delta] head by its mean value delta^2/4: the oscillating part
// of that head is bounded by pi delta^3 / 4, below 1e-10 for delta <= 4e-4.
constexpr double kOscHeadCut = 4e-4;

double osc_integrand(double u) {
    double c = std::cos(1.0 / u);
    return u * c * c;
}

double osc_integral(double upper) {
    if (upper <= 0.0) return 0.0;
    if (upper <= kOscHeadCut) return upper * upper / 4.0;

    // breakpoints: head cut, zeros of cos(1/u) in (cut, upper), width caps
    std::vector<double> breaks;
    breaks.push_back(kOscHeadCut);
    // zeros u_k = 2/((2k+1) pi) ascend as k decreases
    long k_max = static_cast<long>(std::floor((2.0 / (M_PI * kOscHeadCut) - 1.0) / 2.0));
    for (long k = k_max; k >= 0; --k) {
        double z = 2.0 / ((2.0 * k + 1.0) * M_PI);
        if (z > kOscHeadCut && z < upper) breaks.push_back(z);
    }
    breaks.push_back(upper);
    double total = kOscHeadCut * kOscHeadCut / 4.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i], b = breaks[i + 1];
        // smooth non-oscillating stretch above the last zero can be wide
        int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.05)));
        for (int j = 0; j < pieces; ++j) {
            double lo = a + (b - a) * j / pieces;
            double hi = a + (b - a) * (j + 1) / pieces;
            total += gauss16(osc_integrand, lo, hi);
        }
    }
    return total;
}

double quadratic_eval(const RateFunction& s, double x) {
    double d = x - s.center;
    return s.curvature * d * d;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ParseError(std::string(what) + " must be positive", 0);
}

}  // namespace

RateFunction RateFunction::quartic(double a) {
    require_positive(a, "quartic a");
    RateFunction s;
    s.kind = RateKind::Quartic;
    s.a = a;
    return s;
}

RateFunction RateFunction::tilted_quartic(double a, double r) {
    require_positive(a, "tilted a");
    RateFunction s;
    s.kind = RateKind::TiltedQuartic;
    s.a = a;
    s.r = r;
    return s;
}

RateFunction RateFunction::sextic() { return sextic(kSexticDefault); }

RateFunction RateFunction::sextic(const std::vector<double>& coeffs7) {
    if (coeffs7.size() != 7)
        throw ParseError("sextic needs exactly 7 coefficients", 0);
    RateFunction s;
    s.kind = RateKind::Sextic;
    s.coeffs = coeffs7;
    return s;
}

RateFunction RateFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ParseError("poly needs at least one coefficient", 0);
    RateFunction s;
    s.kind = RateKind::Polynomial;
    s.coeffs = std::move(coeffs);
    return s;
}

RateFunction RateFunction::oscillatory_integral() {
    RateFunction s;
    s.kind = RateKind::OscillatoryIntegral;
    return s;
}

RateFunction RateFunction::quadratic(double curvature, double center) {
    require_positive(curvature, "quad c");
    RateFunction s;
    s.kind = RateKind::Quadratic;
    s.curvature = curvature;
    s.center = center;
    return s;
}

bool RateFunction::even_symmetric() const {
    switch (kind) {
        case RateKind::Quartic:
        case RateKind::OscillatoryIntegral:
            return true;
        case RateKind::TiltedQuartic:
            return false;
        case RateKind::Quadratic:
            return center == 0.0;
        case RateKind::Sextic:
        case RateKind::Polynomial: {
            for (std::size_t k = 1; k < coeffs.size(); k += 2)
                if (coeffs[k] != 0.0) return false;
            return true;
        }
    }
    return false;
}

std::vector<double> RateFunction::as_coefficients() const {
    switch (kind) {
        case RateKind::Quartic:
            return {a * a * a * a, 0.0, -2.0 * a * a, 0.0, 1.0};
        case RateKind::TiltedQuartic:
            return {a * a * a * a + r, 1.0, -2.0 * a * a, 0.0, 1.0};
        case RateKind::Sextic:
        case RateKind::Polynomial:
            return coeffs;
        case RateKind::Quadratic:
            return {curvature * center * center, -2.0 * curvature * center, curvature};
        case RateKind::OscillatoryIntegral:
            throw UnsupportedModelError("oscillatory rate function has no coefficient expansion");
    }
    return {};
}

double eval_i(const RateFunction& spec, double x) {
    switch (spec.kind) {
        case RateKind::Quartic: {
            double d = x * x - spec.a * spec.a;
            return d * d;
        }
        case RateKind::TiltedQuartic: {
            double d = x * x - spec.a * spec.a;
            return d * d + x + spec.r;
        }
        case RateKind::Sextic:
        case RateKind::Polynomial:
            return poly::eval(spec.coeffs, x);
        case RateKind::Quadratic:
            return quadratic_eval(spec, x);
        case RateKind::OscillatoryIntegral:
            return osc_integral(std::abs(x));
    }
    return 0.0;
}

double deriv_i(const RateFunction& spec, double x) {
    switch (spec.kind) {
        case RateKind::Quartic:
            return 4.0 * x * (x * x - spec.a * spec.a);
        case RateKind::TiltedQuartic:
            return 4.0 * x * (x * x - spec.a * spec.a) + 1.0;
        case RateKind::Sextic:
        case RateKind::Polynomial:
            return poly::eval(poly::derivative(spec.coeffs), x);
        case RateKind::Quadratic:
            return 2.0 * spec.curvature * (x - spec.center);
        case RateKind::OscillatoryIntegral: {
            if (x == 0.0) return 0.0;
            double c = std::cos(1.0 / x);
            return x * c * c;
        }
    }
    return 0.0;
}

double second_deriv_i(const RateFunction& spec, double x) {
    switch (spec.kind) {
        case RateKind::Quartic:
            return 12.0 * x * x - 4.0 * spec.a * spec.a;
        case RateKind::TiltedQuartic:
            return 12.0 * x * x - 4.0 * spec.a * spec.a;
        case RateKind::Sextic:
        case RateKind::Polynomial:
            return poly::eval(poly::derivative(poly::derivative(spec.coeffs)), x);
        case RateKind::Quadratic:
            return 2.0 * spec.curvature;
        case RateKind::OscillatoryIntegral: {
            if (x == 0.0)
                throw UndefinedCurvatureError(
                    "i'' is undefined at 0 for the oscillatory rate function");
            // d/dx [x cos^2(1/x)] = cos^2(1/x) + sin(2/x)/x
            double c = std::cos(1.0 / x);
            return c * c + std::sin(2.0 / x) / x;
        }
    }
    return 0.0;
}

std::optional<double> curvature_lower_bound(const RateFunction& spec) {
    switch (spec.kind) {
        case RateKind::Quartic:
        case RateKind::TiltedQuartic:
            return -4.0 * spec.a * spec.a;
        case RateKind::Quadratic:
            return 2.0 * spec.curvature;
        case RateKind::OscillatoryIntegral:
            return std::nullopt;  // sin(2/x)/x is unbounded below near 0
        case RateKind::Sextic:
        case RateKind::Polynomial: {
            std::vector<double> dd = poly::trimmed(
                poly::derivative(poly::derivative(spec.coeffs)));
            int deg = poly::degree(dd);
            if (deg <= 0) return dd[0];
            if (deg % 2 == 1 || dd.back() < 0.0) return std::nullopt;
            double best = std::numeric_limits<double>::infinity();
            for (double r : poly::real_roots(poly::derivative(dd)))
                best = std::min(best, poly::eval(dd, r));
            return best;
        }
    }
    return std::nullopt;
}

std::vector<RateMinimum> minima_of_i(const RateFunction& spec) {
    if (!spec.is_polynomial())
        throw UnsupportedModelError("minima_of_i supports polynomial rate kinds only");
    std::vector<double> c = spec.as_coefficients();
    std::vector<double> d1 = poly::derivative(c);
    std::vector<double> d2 = poly::derivative(d1);

    std::vector<RateMinimum> minima;
    for (double r : poly::real_roots(d1)) {
        double curv = poly::eval(d2, r);
        bool is_min;
        if (std::abs(curv) > 1e-9) {
            is_min = curv > 0.0;
        } else {
            // flat stationary point: compare against close neighbors
            double h = 1e-4 * std::max(1.0, std::abs(r));
            double v = poly::eval(c, r);
            is_min = poly::eval(c, r - h) > v && poly::eval(c, r + h) > v;
        }
        if (is_min) minima.push_back({r, poly::eval(c, r), false});
    }
    if (minima.empty()) return minima;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : minima) best = std::min(best, m.value);
    for (auto& m : minima) m.global = (m.value <= best + 1e-9);
    return minima;
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

// key=value pairs separated by commas
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

}  // namespace

RateFunction parse_rate(const std::string& text) {
    std::size_t colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    std::size_t body_at = colon == std::string::npos ? text.size() : colon + 1;

    if (head == "quartic") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("a")) throw ParseError("quartic needs a=", body_at);
        return RateFunction::quartic(parse_double(kv["a"], body_at));
    }
    if (head == "tilted") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("a") || !kv.count("r"))
            throw ParseError("tilted needs a= and r=", body_at);
        return RateFunction::tilted_quartic(parse_double(kv["a"], body_at),
                                            parse_double(kv["r"], body_at));
    }
    if (head == "sextic") {
        if (!body.empty()) throw ParseError("sextic takes no parameters", body_at);
        return RateFunction::sextic();
    }
    if (head == "poly") {
        std::vector<double> coeffs;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            std::string item = body.substr(pos, comma == std::string::npos ? comma : comma - pos);
            coeffs.push_back(parse_double(item, body_at + pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return RateFunction::polynomial(std::move(coeffs));
    }
    if (head == "osc") {
        if (!body.empty()) throw ParseError("osc takes no parameters", body_at);
        return RateFunction::oscillatory_integral();
    }
    if (head == "quad") {
        auto kv = parse_kv(body, body_at);
        if (!kv.count("c") || !kv.count("m"))
            throw ParseError("quad needs c= and m=", body_at);
        return RateFunction::quadratic(parse_double(kv["c"], body_at),
                                       parse_double(kv["m"], body_at));
    }
    throw ParseError("unknown rate function '" + head + "'", 0);
}

std::string format_rate(const RateFunction& spec) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    switch (spec.kind) {
        case RateKind::Quartic:
            return "quartic:a=" + num(spec.a);
        case RateKind::TiltedQuartic:
            return "tilted:a=" + num(spec.a) + ",r=" + num(spec.r);
        case RateKind::Sextic:
            if (spec.coeffs == kSexticDefault) return "sextic";
            [[fallthrough]];
        case RateKind::Polynomial: {
            std::string out = "poly:";
            for (std::size_t k = 0; k < spec.coeffs.size(); ++k) {
                if (k) out += ',';
                out += num(spec.coeffs[k]);
            }
            return out;
        }
        case RateKind::OscillatoryIntegral:
            return "osc";
        case RateKind::Quadratic:
            return "quad:c=" + num(spec.curvature) + ",m=" + num(spec.center);
    }
    return "";
}

}  // namespace condpath
