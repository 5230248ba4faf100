#ifndef CONDPATH_BAD_POINTS_HPP
#define CONDPATH_BAD_POINTS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "condpath/cost_profile.hpp"
#include "condpath/process_model.hpp"
#include "condpath/rate_function.hpp"

namespace condpath {

struct CriticalTime {
    double value = 0.0;
    std::string method;  // "closed_form" | "bisection"
};

// Horizon at which the neutral terminal point acquires a nonzero global
// minimizer. Closed forms for Brownian/OU with quartic rates, bisection
// otherwise. Throws UnsupportedModelError for asymmetric rate functions.
CriticalTime critical_time(const ProcessModel& m, const RateFunction& rate,
                           bool force_bisection = false);

// Where the zero-energy flow started at 0 sits at time T; this is the bad
// point for every drift case with a symmetric rate function.
double neutral_terminal_point(const ProcessModel& m, double T);

// Paper closed forms: 0 / VT / T / (E/k)(1 - e^{-kT}) /
// ((g-1)/(g+1))(1 - e^{-(1+g)T}); nullopt for other combinations.
std::optional<double> closed_form_bad_point(const ProcessModel& m,
                                            const RateFunction& rate, double T);

struct BadPointHit {
    double location = 0.0;
    std::string method;  // "closed_form" | "scan_bisect"
    std::array<double, 2> bracket{0.0, 0.0};
};

struct BadScanResult {
    std::vector<BadPointHit> points;
    // cells where the two-minima structure degenerated; reported, not skipped
    std::vector<std::array<double, 2>> inconclusive_cells;
};

// Scan D_T(b) for sign changes over [b_lo, b_hi] and bisect each to a
// bracket of width 1e-9.
BadScanResult bad_scan(const ProcessModel& m, const RateFunction& rate,
                       double T, double b_lo, double b_hi, int grid_n = 2001);

struct SelectionProbe {
    double epsilon = 0.0;
    std::optional<double> left;   // unique global minimizer at b* - epsilon
    std::optional<double> right;  // unique global minimizer at b* + epsilon
    bool left_tie = false;        // probe hit a tie and was skipped
    bool right_tie = false;
};

struct SelectionLimits {
    std::vector<SelectionProbe> probes;
    std::optional<double> left_limit;
    std::optional<double> right_limit;
    bool separated = false;  // limits differ by more than the threshold
};

// One-sided minimizer sequences approaching a bad point. Ties are detected
// against the floating-point scale of the cost values, not the profile's
// 1e-9 grouping tolerance: probes near a bad point sit close to an exact
// tie by construction, and the closed-form costs resolve far below 1e-9.
SelectionLimits selection_limits(const ProcessModel& m, const RateFunction& rate,
                                 double b_star, double T,
                                 std::vector<double> epsilons = {},
                                 double separation_threshold = 1e-3);

enum class BadVerdict { Bad, NotBad, Inconclusive };

struct AlwaysBadResult {
    double T = 0.0;
    BadVerdict verdict = BadVerdict::Inconclusive;
    double minimizer = 0.0;  // grid argmin of i(A) + A^2/(2T)
};

// Brownian dynamics with the given (symmetric) rate function: does the
// profile at b = 0 have a nonzero global minimizer? Uses a logarithmically
// refined grid down to |A| = 1e-6.
std::vector<AlwaysBadResult> always_bad_check(const RateFunction& rate,
                                              const std::vector<double>& T_list);

// Aggregated report for one (model, rate, T): critical time when the rate
// is symmetric, closed-form and scanned bad points, selection limits.
struct BadPointReport {
    ProcessModel model;
    RateFunction rate;
    double T = 0.0;
    std::optional<CriticalTime> critical;
    std::vector<BadPointHit> bad_points;
    std::vector<std::array<double, 2>> inconclusive_cells;
    std::vector<SelectionLimits> selection;  // parallel to bad_points
};

BadPointReport build_bad_point_report(const ProcessModel& m,
                                      const RateFunction& rate, double T,
                                      std::optional<std::pair<double, double>>
                                          scan_range = std::nullopt);

}  // namespace condpath

#endif
