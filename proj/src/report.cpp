#include "condpath/report.hpp"

#include <cstdio>

#include "condpath/numerics.hpp"

namespace condpath {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunManifest::config_hash() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(command + config.dump())));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},
            {"config", config},
            {"version", kToolVersion},
            {"seed", seed},
            {"config_hash", config_hash()},
            {"wall_time_ms", wall_time_ms}};
}

namespace {

const char* kind_name(StationaryKind k) {
    switch (k) {
        case StationaryKind::Minimum:
            return "min";
        case StationaryKind::Maximum:
            return "max";
        default:
            return "saddle/inflection";
    }
}

const char* prediction_name(PredictionKind k) {
    switch (k) {
        case PredictionKind::PointMass:
            return "point_mass";
        case PredictionKind::SymmetricPair:
            return "symmetric_pair";
        default:
            return "multi";
    }
}

nlohmann::json prediction_json(const ConditionalLimitPrediction& p) {
    nlohmann::json j;
    j["kind"] = prediction_name(p.kind);
    j["locations"] = p.locations;
    if (p.kind == PredictionKind::Multi)
        j["weights"] = nullptr;  // undetermined in non-symmetric ties
    else
        j["weights"] = p.weights;
    return j;
}

}  // namespace

nlohmann::json profile_report(const CostProfile& profile,
                              const ConditionalLimitPrediction& prediction) {
    nlohmann::json j;
    j["model"] = format_model(profile.model);
    j["rate"] = format_rate(profile.rate);
    j["b"] = profile.b;
    j["T"] = profile.T;
    j["alpha"] = profile.alpha ? nlohmann::json(*profile.alpha) : nlohmann::json(nullptr);
    j["stationary_points"] = nlohmann::json::array();
    for (const auto& sp : profile.stationary_points)
        j["stationary_points"].push_back(
            {{"A", sp.location}, {"value", sp.value}, {"kind", kind_name(sp.kind)}});
    j["global_minimizers"] = profile.global_minimizers;
    j["prediction"] = prediction_json(prediction);
    return j;
}

nlohmann::json bad_point_report_json(const BadPointReport& report) {
    nlohmann::json j;
    j["model"] = format_model(report.model);
    j["rate"] = format_rate(report.rate);
    j["T"] = report.T;
    if (report.critical)
        j["critical_time"] = {{"value", report.critical->value},
                              {"method", report.critical->method}};
    else
        j["critical_time"] = nullptr;
    j["bad_points"] = nlohmann::json::array();
    for (const auto& hit : report.bad_points)
        j["bad_points"].push_back({{"b", hit.location},
                                   {"method", hit.method},
                                   {"bracket", {hit.bracket[0], hit.bracket[1]}}});
    j["inconclusive_cells"] = nlohmann::json::array();
    for (const auto& cell : report.inconclusive_cells)
        j["inconclusive_cells"].push_back({cell[0], cell[1]});
    j["selection"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.selection.size(); ++i) {
        const auto& sel = report.selection[i];
        nlohmann::json s;
        s["bad_point"] = report.bad_points[i].location;
        s["probes"] = nlohmann::json::array();
        for (const auto& probe : sel.probes) {
            nlohmann::json p;
            p["epsilon"] = probe.epsilon;
            p["left_min"] = probe.left ? nlohmann::json(*probe.left) : nlohmann::json(nullptr);
            p["right_min"] =
                probe.right ? nlohmann::json(*probe.right) : nlohmann::json(nullptr);
            if (probe.left_tie) p["left_tie"] = true;
            if (probe.right_tie) p["right_tie"] = true;
            s["probes"].push_back(p);
        }
        s["left_limit"] =
            sel.left_limit ? nlohmann::json(*sel.left_limit) : nlohmann::json(nullptr);
        s["right_limit"] =
            sel.right_limit ? nlohmann::json(*sel.right_limit) : nlohmann::json(nullptr);
        s["separated"] = sel.separated;
        j["selection"].push_back(s);
    }
    return j;
}

nlohmann::json trajectory_summary(const Trajectory& traj) {
    nlohmann::json j;
    j["start"] = traj.start;
    j["terminal"] = traj.terminal;
    j["energy"] = traj.energy;
    j["action"] = traj.action;
    j["total_cost"] =
        traj.total_cost ? nlohmann::json(*traj.total_cost) : nlohmann::json(nullptr);
    j["provenance"] = traj.provenance;
    j["samples"] = traj.positions.size();
    if (traj.exited_state_space) j["exited_state_space"] = true;
    return j;
}

nlohmann::json mc_report(const McConfig& cfg, const ConditionedEmpirical& emp,
                         const McVerdict& verdict, const McThresholds& thresholds,
                         const ConditionalLimitPrediction& prediction) {
    nlohmann::json j;
    j["model"] = format_model(cfg.model);
    j["rate"] = format_rate(cfg.rate);
    j["T"] = cfg.T;
    j["n"] = cfg.n;
    j["paths"] = cfg.paths;
    j["b"] = cfg.b;
    j["window"] = cfg.window;
    j["seed"] = cfg.seed;
    j["accepted"] = emp.accepted;
    j["acceptance_rate"] = emp.acceptance_rate;
    j["radius"] = emp.radius;
    j["prediction"] = prediction_json(prediction);
    j["masses"] = nlohmann::json::array();
    for (const auto& [loc, mass] : emp.mass_near)
        j["masses"].push_back({{"location", loc}, {"mass", mass}});
    j["thresholds"] = {{"point_mass_min", thresholds.point_mass_min},
                       {"pair_min", thresholds.pair_min},
                       {"pair_imbalance", thresholds.pair_imbalance},
                       {"radius_cap", thresholds.radius_cap},
                       {"min_accepted", thresholds.min_accepted}};
    j["verdict"] = {{"pass", verdict.pass}, {"detail", verdict.detail}};
    return j;
}

std::string trajectory_csv(const Trajectory& traj, const std::string& manifest_hash) {
    std::string out = "# manifest " + manifest_hash + "\n";
    out += "t,x,p,energy\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.positions[i]);
        out += ',';
        out += traj.momenta.empty() ? "" : format_double(traj.momenta[i]);
        out += ',';
        out += format_double(traj.energy);
        out += '\n';
    }
    return out;
}

std::string surface_csv(const std::string& header,
                        const std::vector<std::array<double, 3>>& rows,
                        const std::string& manifest_hash) {
    std::string out = "# manifest " + manifest_hash + "\n";
    out += header;
    out += '\n';
    for (const auto& row : rows) {
        out += format_double(row[0]);
        out += ',';
        out += format_double(row[1]);
        out += ',';
        out += format_double(row[2]);
        out += '\n';
    }
    return out;
}

std::string accepted_starts_csv(const ConditionedEmpirical& emp,
                                const std::string& manifest_hash) {
    std::string out = "# manifest " + manifest_hash + "\n";
    out += "path_index,x0,xT\n";
    for (std::size_t i = 0; i < emp.starts.size(); ++i) {
        out += std::to_string(emp.path_indices[i]);
        out += ',';
        out += format_double(emp.starts[i]);
        out += ',';
        out += format_double(emp.terminals[i]);
        out += '\n';
    }
    return out;
}

}  // namespace condpath
