#ifndef CONDPATH_COST_PROFILE_HPP
#define CONDPATH_COST_PROFILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "condpath/process_model.hpp"
#include "condpath/rate_function.hpp"

namespace condpath {

enum class StationaryKind { Minimum, Maximum, SaddleOrInflection };

struct StationaryPoint {
    double location = 0.0;
    double value = 0.0;
    StationaryKind kind = StationaryKind::Minimum;
};

enum class PredictionKind { PointMass, SymmetricPair, Multi };

// Limiting conditional law of X_0 given X_T = b: point mass, symmetric
// 1/2-1/2 pair, or a tie whose weights the scaling limit does not fix.
struct ConditionalLimitPrediction {
    PredictionKind kind = PredictionKind::PointMass;
    std::vector<double> locations;
    std::vector<double> weights;  // empty for Multi
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 4001;
};

// Starting-point cost function E_{b,T}(A) = i(A) + optimal path cost.
struct CostProfile {
    ProcessModel model;
    RateFunction rate;
    double b = 0.0;
    double T = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<StationaryPoint> stationary_points;
    std::vector<double> global_minimizers;  // ties within 1e-9 on values
    std::optional<double> alpha;            // 1/(2T) - 2a^2, quartic-family Brownian
};

// Optimal path cost from A to b in time T. Quadratic closed form for the
// Brownian/OU families, solver-backed for spin flips, constant-rate walks
// and general drifts.
double path_cost_closed_form(const ProcessModel& m, double A, double b, double T);

// Sum of the two cost components at one starting point.
double total_cost_at(const ProcessModel& m, const RateFunction& rate,
                     double A, double b, double T);

GridSpec default_grid(const ProcessModel& m, const RateFunction& rate, double b);

CostProfile build_profile(const ProcessModel& m, const RateFunction& rate,
                          double b, double T,
                          std::optional<GridSpec> grid = std::nullopt,
                          unsigned threads = 0);

// Stationary points only, skipping the dense value grid; this is what scans
// over b or T iterate on.
std::vector<StationaryPoint> profile_stationary_points(
    const ProcessModel& m, const RateFunction& rate, double b, double T,
    std::optional<GridSpec> range = std::nullopt);

// Locations of the value-tied global minimizers among the given points.
std::vector<double> tied_global_minimizers(const std::vector<StationaryPoint>& pts);

// D_T(b) = value(A^1) - value(A^2) for the two lowest local minima
// A^1 < A^2. Throws FewMinimaError with fewer than two.
double equal_height_gap(const CostProfile& profile);

ConditionalLimitPrediction predict_conditional_limit(const CostProfile& profile);

// -1/d with d = inf i'' when d < 0; nullopt when d >= 0 (profiles are
// always uniquely minimized) or d is unbounded below (no bound exists).
std::optional<double> short_time_uniqueness_bound(const RateFunction& rate);

}  // namespace condpath

#endif
