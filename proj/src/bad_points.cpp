#include "condpath/bad_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"
#include "condpath/trajectory.hpp"

namespace condpath {

namespace {

constexpr double kPitchforkGuard = 1e-7;  // |A| below this is "the origin"
constexpr double kBisectTol = 1e-8;
constexpr double kBracketWidth = 1e-9;

}  // namespace

double neutral_terminal_point(const ProcessModel& m, double T) {
    switch (m.kind) {
        case ModelKind::Brownian:
        case ModelKind::OrnsteinUhlenbeck:
            return 0.0;
        case ModelKind::BrownianDrift:
            return m.drift_v * T;
        case ModelKind::OUField:
            return m.field / m.kappa * (1.0 - std::exp(-m.kappa * T));
        case ModelKind::GeneralDrift:
            return 0.0;  // odd drift fixes the origin
        case ModelKind::BirthDeath:
            return (m.birth_rate - m.death_rate) * T;
        case ModelKind::SpinFlip: {
            double delta = 1.0 + m.gamma;
            return (m.gamma - 1.0) / (m.gamma + 1.0) * (1.0 - std::exp(-delta * T));
        }
    }
    return 0.0;
}

CriticalTime critical_time(const ProcessModel& m, const RateFunction& rate,
                           bool force_bisection) {
    if (!rate.even_symmetric())
        throw UnsupportedModelError(
            "critical_time needs an even rate function; use bad_scan instead");

    if (!force_bisection && rate.kind == RateKind::Quartic) {
        double a = rate.a;
        switch (m.kind) {
            case ModelKind::Brownian:
            case ModelKind::BrownianDrift:
                return {1.0 / (4.0 * a * a), "closed_form"};
            case ModelKind::OrnsteinUhlenbeck:
            case ModelKind::OUField:
                // field does not shift it
                return {-1.0 / (2.0 * m.kappa) *
                            std::log(2.0 * a * a / (2.0 * a * a + m.kappa)),
                        "closed_form"};
            default:
                break;
        }
    }

    auto predicate = [&](double T) {
        double b = neutral_terminal_point(m, T);
        auto pts = profile_stationary_points(m, rate, b, T);
        for (double A : tied_global_minimizers(pts))
            if (std::abs(A) > kPitchforkGuard) return true;
        return false;
    };

    double t_hi = 0.05;
    while (!predicate(t_hi)) {
        t_hi *= 2.0;
        if (t_hi > 512.0)
            throw NoSolutionError("no critical time found below T = 512");
    }
    double t_lo = t_hi / 2.0;
    if (t_hi <= 0.05) t_lo = 1e-6;
    while (t_hi - t_lo > kBisectTol) {
        double mid = 0.5 * (t_lo + t_hi);
        (predicate(mid) ? t_hi : t_lo) = mid;
    }
    return {0.5 * (t_lo + t_hi), "bisection"};
}

std::optional<double> closed_form_bad_point(const ProcessModel& m,
                                            const RateFunction& rate, double T) {
    switch (m.kind) {
        case ModelKind::Brownian:
            if (rate.kind == RateKind::TiltedQuartic) return T;
            if (rate.even_symmetric()) return 0.0;
            return std::nullopt;
        case ModelKind::BrownianDrift:
            if (rate.even_symmetric()) return m.drift_v * T;
            return std::nullopt;
        case ModelKind::OrnsteinUhlenbeck:
            if (rate.even_symmetric()) return 0.0;
            return std::nullopt;
        case ModelKind::OUField:
            if (rate.even_symmetric()) return neutral_terminal_point(m, T);
            return std::nullopt;
        case ModelKind::SpinFlip:
            if (rate.even_symmetric()) return neutral_terminal_point(m, T);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

namespace {

// D_T(b) from the lean stationary solve; nullopt when the two-minima
// structure is absent.
std::optional<double> height_gap_at(const ProcessModel& m, const RateFunction& rate,
                                    double b, double T) {
    auto pts = profile_stationary_points(m, rate, b, T);
    std::vector<StationaryPoint> minima;
    for (const auto& sp : pts)
        if (sp.kind == StationaryKind::Minimum) minima.push_back(sp);
    if (minima.size() < 2) return std::nullopt;
    std::sort(minima.begin(), minima.end(),
              [](const StationaryPoint& a, const StationaryPoint& b) {
                  return a.value < b.value;
              });
    const StationaryPoint* lower = &minima[0];
    const StationaryPoint* upper = &minima[1];
    if (lower->location > upper->location) std::swap(lower, upper);
    return lower->value - upper->value;
}

}  // namespace

BadScanResult bad_scan(const ProcessModel& m, const RateFunction& rate,
                       double T, double b_lo, double b_hi, int grid_n) {
    BadScanResult result;
    if (grid_n < 2) grid_n = 2;

    double prev_b = b_lo;
    std::optional<double> prev_d = height_gap_at(m, rate, prev_b, T);
    for (int i = 1; i < grid_n; ++i) {
        double b = b_lo + (b_hi - b_lo) * static_cast<double>(i) / (grid_n - 1);
        std::optional<double> d = height_gap_at(m, rate, b, T);
        if (!d || !prev_d) {
            if (!d) result.inconclusive_cells.push_back({prev_b, b});
        } else if (*prev_d == 0.0) {
            result.points.push_back({prev_b, "scan_bisect", {prev_b, prev_b}});
        } else if (*d != 0.0 && *prev_d * *d < 0.0) {
            double lo = prev_b, hi = b;
            double flo = *prev_d;
            bool degenerate = false;
            while (hi - lo > kBracketWidth) {
                double mid = 0.5 * (lo + hi);
                auto fm = height_gap_at(m, rate, mid, T);
                if (!fm) {
                    degenerate = true;
                    break;
                }
                if (*fm == 0.0) {
                    lo = mid - 0.25 * kBracketWidth;
                    hi = mid + 0.25 * kBracketWidth;
                    break;
                }
                if (flo * *fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = *fm;
                }
            }
            if (degenerate) {
                result.inconclusive_cells.push_back({lo, hi});
            } else {
                result.points.push_back({0.5 * (lo + hi), "scan_bisect", {lo, hi}});
            }
        }
        prev_b = b;
        prev_d = d;
    }
    return result;
}

namespace {

// Exact-argmin minimizer with a tie tolerance scaled to the floating-point
// resolution of the cost components (|i| + |path cost|), not the 1e-9
// grouping tolerance used for global_minimizers.
std::optional<double> resolved_minimizer(const ProcessModel& m,
                                         const RateFunction& rate, double b,
                                         double T, bool& tie) {
    auto pts = profile_stationary_points(m, rate, b, T);
    const StationaryPoint* best = nullptr;
    const StationaryPoint* second = nullptr;
    for (const auto& sp : pts) {
        if (sp.kind != StationaryKind::Minimum) continue;
        if (!best || sp.value < best->value) {
            second = best;
            best = &sp;
        } else if (!second || sp.value < second->value) {
            second = &sp;
        }
    }
    tie = false;
    if (!best) return std::nullopt;
    if (second) {
        auto scale = [&](const StationaryPoint& sp) {
            return std::abs(eval_i(rate, sp.location)) +
                   std::abs(path_cost_closed_form(m, sp.location, b, T)) + 1e-300;
        };
        double tol = 1e-12 * std::max(scale(*best), scale(*second));
        // solver-backed path costs only resolve to the action quadrature
        if (m.kind == ModelKind::SpinFlip || m.kind == ModelKind::GeneralDrift)
            tol = std::max(tol, 1e-10);
        if (second->value - best->value <= tol) {
            tie = true;
            return std::nullopt;
        }
    }
    return best->location;
}

}  // namespace

SelectionLimits selection_limits(const ProcessModel& m, const RateFunction& rate,
                                 double b_star, double T,
                                 std::vector<double> epsilons,
                                 double separation_threshold) {
    if (epsilons.empty())
        for (int k = 1; k <= 8; ++k) epsilons.push_back(std::pow(10.0, -k));

    SelectionLimits out;
    for (double eps : epsilons) {
        SelectionProbe probe;
        probe.epsilon = eps;
        probe.left = resolved_minimizer(m, rate, b_star - eps, T, probe.left_tie);
        probe.right = resolved_minimizer(m, rate, b_star + eps, T, probe.right_tie);
        if (probe.left) out.left_limit = probe.left;
        if (probe.right) out.right_limit = probe.right;
        out.probes.push_back(probe);
    }
    out.separated = out.left_limit && out.right_limit &&
                    std::abs(*out.left_limit - *out.right_limit) > separation_threshold;
    return out;
}

std::vector<AlwaysBadResult> always_bad_check(const RateFunction& rate,
                                              const std::vector<double>& T_list) {
    // logarithmic grid near 0 (down to 1e-6) plus a linear outer part
    std::vector<double> half;
    for (int i = 0; i <= 240; ++i)
        half.push_back(std::pow(10.0, -6.0 + 6.5 * static_cast<double>(i) / 240.0));
    std::vector<double> grid;
    grid.push_back(0.0);
    for (double a : half) {
        grid.push_back(a);
        grid.push_back(-a);
    }
    std::sort(grid.begin(), grid.end());

    std::vector<AlwaysBadResult> verdicts;
    for (double T : T_list) {
        AlwaysBadResult res;
        res.T = T;
        double best_val = std::numeric_limits<double>::infinity();
        double best_a = 0.0;
        for (double A : grid) {
            double v = eval_i(rate, A) + A * A / (2.0 * T);
            if (v < best_val) {
                best_val = v;
                best_a = A;
            }
        }
        res.minimizer = best_a;
        double smallest_nonzero = half.front();
        if (std::abs(best_a) <= kPitchforkGuard) {
            res.verdict = BadVerdict::NotBad;
        } else if (std::abs(best_a) <= 2.0 * smallest_nonzero) {
            res.verdict = BadVerdict::Inconclusive;  // below grid resolution
        } else {
            res.verdict = BadVerdict::Bad;
        }
        verdicts.push_back(res);
    }
    return verdicts;
}

BadPointReport build_bad_point_report(const ProcessModel& m,
                                      const RateFunction& rate, double T,
                                      std::optional<std::pair<double, double>>
                                          scan_range) {
    BadPointReport report;
    report.model = m;
    report.rate = rate;
    report.T = T;

    if (rate.even_symmetric()) {
        try {
            report.critical = critical_time(m, rate);
        } catch (const Error&) {
            // no criticality in range; leave empty
        }
    }

    if (auto cf = closed_form_bad_point(m, rate, T))
        report.bad_points.push_back({*cf, "closed_form", {*cf, *cf}});

    if (scan_range) {
        auto scanned = bad_scan(m, rate, T, scan_range->first, scan_range->second);
        for (const auto& hit : scanned.points) {
            bool duplicate = false;
            for (const auto& known : report.bad_points)
                if (std::abs(known.location - hit.location) < 1e-6) duplicate = true;
            if (!duplicate) report.bad_points.push_back(hit);
        }
        report.inconclusive_cells = scanned.inconclusive_cells;
    }

    for (const auto& hit : report.bad_points)
        report.selection.push_back(selection_limits(m, rate, hit.location, T));
    return report;
}

}  // namespace condpath
