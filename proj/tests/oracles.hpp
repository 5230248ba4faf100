// Test-only oracles, kept independent of the solver paths they check.
#ifndef CONDPATH_TESTS_ORACLES_HPP
#define CONDPATH_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Central finite difference.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd_second(const std::function<double(double)>& f, double x,
                        double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Brute-force Legendre transform: max of p v - H(x, p) over a p grid,
// refined twice around the best cell.
inline double legendre_by_grid(const std::function<double(double)>& H_of_p,
                               double v, double p_lo, double p_hi, int n = 4001) {
    auto sweep = [&](double lo, double hi, double& arg) {
        double best = -1e300;
        for (int i = 0; i < n; ++i) {
            double p = lo + (hi - lo) * i / (n - 1);
            double val = p * v - H_of_p(p);
            if (val > best) {
                best = val;
                arg = p;
            }
        }
        return best;
    };
    double arg = 0.0;
    double best = sweep(p_lo, p_hi, arg);
    double width = (p_hi - p_lo) / (n - 1);
    for (int stage = 0; stage < 2; ++stage) {
        best = std::max(best, sweep(arg - 2.0 * width, arg + 2.0 * width, arg));
        width = 4.0 * width / (n - 1);
    }
    return best;
}

// Local minima of f on a dense grid, polished by bisection on the sign of
// the central finite difference of f (value-search-free, so it localizes
// far below the sqrt(epsilon) limit of golden-section).
inline std::vector<double> grid_polish_minima(const std::function<double(double)>& f,
                                              double lo, double hi, int n = 8001) {
    std::vector<double> mins;
    double step = (hi - lo) / (n - 1);
    auto df = [&](double x) { return f(x + 1e-6) - f(x - 1e-6); };
    double prev = f(lo), cur = f(lo + step);
    for (int i = 1; i + 1 < n; ++i) {
        double next = f(lo + step * (i + 1));
        if (cur <= prev && cur <= next && (cur < prev || cur < next)) {
            double a = lo + step * (i - 1), b = lo + step * (i + 1);
            double fa = df(a), fb = df(b);
            if (fa < 0.0 && fb > 0.0) {
                for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                    double m = 0.5 * (a + b);
                    (df(m) < 0.0 ? a : b) = m;
                }
                mins.push_back(0.5 * (a + b));
            } else {
                mins.push_back(lo + step * i);
            }
        }
        prev = cur;
        cur = next;
    }
    return mins;
}

// Deterministic uniform draws for property tests.
class Draw {
  public:
    explicit Draw(unsigned seed) : rng_(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    int integer(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

  private:
    std::mt19937_64 rng_;
};

}  // namespace oracles

#endif
