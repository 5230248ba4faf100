#ifndef CONDPATH_REPORT_HPP
#define CONDPATH_REPORT_HPP

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "condpath/bad_points.hpp"
#include "condpath/cost_profile.hpp"
#include "condpath/mc.hpp"
#include "condpath/trajectory.hpp"

namespace condpath {

inline constexpr const char* kToolVersion = "0.1.0";

// Every emitted file embeds (JSON) or references by hash (CSV) the manifest
// of the run that produced it. Reruns with an equal manifest produce
// byte-identical payloads except for the wall_time_ms field.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;

    std::string config_hash() const;
    nlohmann::json to_json() const;
};

nlohmann::json profile_report(const CostProfile& profile,
                              const ConditionalLimitPrediction& prediction);
nlohmann::json bad_point_report_json(const BadPointReport& report);
nlohmann::json trajectory_summary(const Trajectory& traj);
nlohmann::json mc_report(const McConfig& cfg, const ConditionedEmpirical& emp,
                         const McVerdict& verdict, const McThresholds& thresholds,
                         const ConditionalLimitPrediction& prediction);

// CSV payloads; numeric cells use 17-significant-digit formatting.
std::string trajectory_csv(const Trajectory& traj, const std::string& manifest_hash);
std::string surface_csv(const std::string& header,
                        const std::vector<std::array<double, 3>>& rows,
                        const std::string& manifest_hash);
std::string accepted_starts_csv(const ConditionedEmpirical& emp,
                                const std::string& manifest_hash);

std::string format_double(double v);  // %.17g

}  // namespace condpath

#endif
