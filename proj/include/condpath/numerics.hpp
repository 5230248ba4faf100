#ifndef CONDPATH_NUMERICS_HPP
#define CONDPATH_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace condpath {

// ---------------------------------------------------------------------------
// Polynomials, stored as coefficients c[0] + c[1] x + ... + c[n] x^n.
// ---------------------------------------------------------------------------
namespace poly {

double eval(const std::vector<double>& c, double x);  // Horner
std::vector<double> derivative(const std::vector<double>& c);
// Strip trailing coefficients that are exactly zero.
std::vector<double> trimmed(const std::vector<double>& c);
int degree(const std::vector<double>& c);

// All real roots via companion-matrix eigenvalues, Newton-polished and
// deduplicated. Empty for constant polynomials.
std::vector<double> real_roots(const std::vector<double>& c);

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 by the depressed-cubic
// closed form with a discriminant branch, one Newton polish step.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0);

}  // namespace poly

// ---------------------------------------------------------------------------
// Root bracketing / refinement.
// ---------------------------------------------------------------------------

// Bisection with secant acceleration on a sign-changing bracket.
// Requires f(lo) and f(hi) of opposite sign (zero endpoints accepted).
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double xtol = 1e-13, int max_iter = 200);

// Scan [lo, hi] with n evaluation points, refine every sign change.
std::vector<double> scan_roots(const std::function<double(double)>& f,
                               double lo, double hi, int n,
                               double xtol = 1e-13);

// Same, over an explicit sorted probe sequence.
std::vector<double> scan_roots_at(const std::function<double(double)>& f,
                                  const std::vector<double>& probes,
                                  double xtol = 1e-13);

// ---------------------------------------------------------------------------
// Quadrature.
// ---------------------------------------------------------------------------

// Composite Simpson over uniformly spaced samples (trapezoid fixup on the
// last interval when the count is even).
double simpson_uniform(const std::vector<double>& values, double dt);

// Integrate f over [a, b] with composite Simpson, doubling the grid until
// the result changes by less than tol (absolute) or max_doublings is hit.
double simpson_refine(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-12, int max_doublings = 16);

// Fixed 16-point Gauss-Legendre rule on [a, b].
double gauss16(const std::function<double(double)>& f, double a, double b);

// ---------------------------------------------------------------------------
// RNG stream derivation (counter-based: path k gets an independent stream
// that does not depend on how many draws earlier paths made).
// ---------------------------------------------------------------------------
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

// FNV-1a 64-bit hash of a byte string, for config fingerprints.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace condpath

#endif
