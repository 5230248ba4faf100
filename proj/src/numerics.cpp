#include "condpath/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace condpath {

namespace poly {

double eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

std::vector<double> trimmed(const std::vector<double>& c) {
    std::vector<double> t = c;
    while (t.size() > 1 && t.back() == 0.0) t.pop_back();
    return t;
}

int degree(const std::vector<double>& c) {
    return static_cast<int>(trimmed(c).size()) - 1;
}

namespace {

double newton_polish(const std::vector<double>& c, const std::vector<double>& d,
                     double x, int steps) {
    for (int i = 0; i < steps; ++i) {
        double fp = eval(d, x);
        if (fp == 0.0) break;
        double step = eval(c, x) / fp;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

std::vector<double> real_roots(const std::vector<double>& c_in) {
    std::vector<double> c = trimmed(c_in);
    int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    if (n == 1) return {-c[0] / c[1]};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    const auto& ev = solver.eigenvalues();

    double scale = 0.0;
    for (double ci : c) scale = std::max(scale, std::abs(ci));

    std::vector<double> d = derivative(c);
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        double re = ev[i].real(), im = ev[i].imag();
        if (std::abs(im) > 1e-8 * std::max(1.0, std::abs(re))) continue;
        double r = newton_polish(c, d, re, 3);
        if (std::abs(eval(c, r)) > 1e-6 * std::max(1.0, scale)) continue;
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    // merge near-duplicates (conjugate pairs collapsing onto a double root)
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || std::abs(r - unique.back()) > 1e-9 * std::max(1.0, std::abs(r)))
            unique.push_back(r);
    }
    return unique;
}

std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
    if (c3 == 0.0) return real_roots({c0, c1, c2});
    // depressed form t^3 + p t + q with x = t - c2/(3 c3)
    double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    double shift = a / 3.0;
    double p = b - a * a / 3.0;
    double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    double disc = q * q / 4.0 + p * p * p / 27.0;

    std::vector<double> roots;
    if (disc > 0.0) {
        // one real root (Cardano)
        double s = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + s);
        double v = std::cbrt(-q / 2.0 - s);
        roots.push_back(u + v - shift);
    } else if (disc == 0.0) {
        double u = std::cbrt(-q / 2.0);
        roots.push_back(2.0 * u - shift);
        if (u != 0.0) roots.push_back(-u - shift);
    } else {
        // three real roots (trigonometric branch)
        double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) - shift);
    }
    std::vector<double> cs = {c0, c1, c2, c3};
    std::vector<double> ds = poly::derivative(cs);
    for (double& r : roots) r = newton_polish(cs, ds, r, 1);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace poly

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("find_root: endpoints do not bracket a sign change");
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        // secant candidate, fall back to midpoint when it leaves the bracket
        double mid = 0.5 * (lo + hi);
        double denom = fhi - flo;
        if (denom != 0.0) {
            double sec = lo - flo * (hi - lo) / denom;
            if (sec > lo + 0.01 * (hi - lo) && sec < hi - 0.01 * (hi - lo)) mid = sec;
        }
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const std::function<double(double)>& f,
                               double lo, double hi, int n, double xtol) {
    std::vector<double> probes;
    if (n < 2) return probes;
    probes.resize(n);
    for (int i = 0; i < n; ++i)
        probes[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return scan_roots_at(f, probes, xtol);
}

std::vector<double> scan_roots_at(const std::function<double(double)>& f,
                                  const std::vector<double>& probes,
                                  double xtol) {
    std::vector<double> roots;
    if (probes.size() < 2) return roots;
    double prev_x = probes[0], prev_f = f(prev_x);
    for (std::size_t i = 1; i < probes.size(); ++i) {
        double x = probes[i];
        double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (fx != 0.0 && prev_f * fx < 0.0) {
            roots.push_back(find_root(f, prev_x, x, xtol));
        }
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) roots.push_back(prev_x);
    return roots;
}

double simpson_uniform(const std::vector<double>& v, double dt) {
    std::size_t n = v.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dt * (v[0] + v[1]);
    std::size_t intervals = n - 1;
    double total = 0.0;
    std::size_t simpson_end = (intervals % 2 == 0) ? n - 1 : n - 2;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
        total += dt / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
    if (intervals % 2 != 0) total += 0.5 * dt * (v[n - 2] + v[n - 1]);
    return total;
}

double simpson_refine(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_doublings) {
    int n = 16;
    auto run = [&](int segments) {
        double h = (b - a) / segments;
        double total = f(a) + f(b);
        for (int i = 1; i < segments; ++i)
            total += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
        return total * h / 3.0;
    };
    double prev = run(n);
    for (int k = 0; k < max_doublings; ++k) {
        n *= 2;
        double cur = run(n);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

double gauss16(const std::function<double(double)>& f, double a, double b) {
    // abscissae/weights for n=16 on [-1,1]
    static const double xs[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double total = 0.0;
    for (int i = 0; i < 8; ++i)
        total += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
    return total * half;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0xA0761D6478BD642FULL * (index + 1));
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return a ^ (b << 1);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace condpath
