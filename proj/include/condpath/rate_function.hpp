#ifndef CONDPATH_RATE_FUNCTION_HPP
#define CONDPATH_RATE_FUNCTION_HPP

#include <optional>
#include <string>
#include <vector>

namespace condpath {

// Initial-measure rate functions i(x). All are defined on the full line;
// state-space restriction (spin-flip models live on [-1,1]) is applied by
// the profile layer, not here.
enum class RateKind {
    Quartic,              // (x^2 - a^2)^2
    TiltedQuartic,        // (x^2 - a^2)^2 + x + r
    Sextic,               // degree-6 polynomial, default coefficients built in
    Polynomial,           // arbitrary coefficients c0..cn
    OscillatoryIntegral,  // int_0^{|x|} u cos^2(1/u) du
    Quadratic             // c (x - m)^2
};

struct RateFunction {
    RateKind kind = RateKind::Quartic;
    double a = 1.0;                // Quartic / TiltedQuartic
    double r = 0.0;                // TiltedQuartic
    double curvature = 1.0;        // Quadratic: i'' = 2 * curvature
    double center = 0.0;           // Quadratic
    std::vector<double> coeffs;    // Sextic / Polynomial, c0..cn

    static RateFunction quartic(double a);
    static RateFunction tilted_quartic(double a, double r);
    static RateFunction sextic();  // 7x^6 - 24x^5 + 9x^4 + 38x^3 - 42x^2 + 40
    static RateFunction sextic(const std::vector<double>& coeffs7);
    static RateFunction polynomial(std::vector<double> coeffs);
    static RateFunction oscillatory_integral();
    static RateFunction quadratic(double curvature, double center);

    bool is_polynomial() const { return kind != RateKind::OscillatoryIntegral; }
    bool even_symmetric() const;
    // Coefficient expansion c0..cn; throws UnsupportedModelError for the
    // oscillatory kind.
    std::vector<double> as_coefficients() const;
};

double eval_i(const RateFunction& spec, double x);
double deriv_i(const RateFunction& spec, double x);
// Throws UndefinedCurvatureError for OscillatoryIntegral at x = 0.
double second_deriv_i(const RateFunction& spec, double x);

// inf of i'' over the domain; nullopt means unbounded below.
std::optional<double> curvature_lower_bound(const RateFunction& spec);

struct RateMinimum {
    double location = 0.0;
    double value = 0.0;
    bool global = false;
};

// All local minima of a polynomial-kind rate function, global ones flagged
// with a 1e-9 absolute tie tolerance on values.
std::vector<RateMinimum> minima_of_i(const RateFunction& spec);

// Grammar: quartic:a=2 | tilted:a=2,r=2.01539 | sextic | poly:c0,...,cn |
//          osc | quad:c=1,m=0
RateFunction parse_rate(const std::string& text);
std::string format_rate(const RateFunction& spec);

}  // namespace condpath

#endif
