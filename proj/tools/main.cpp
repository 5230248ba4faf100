// condpath: optimal conditioned trajectories of small-noise Markov
// processes, starting-point cost profiles, bad-point detection, and
// finite-noise Monte Carlo verification.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "condpath/bad_points.hpp"
#include "condpath/cost_profile.hpp"
#include "condpath/errors.hpp"
#include "condpath/mc.hpp"
#include "condpath/report.hpp"
#include "condpath/trajectory.hpp"

namespace {

using condpath::RunManifest;

struct GlobalOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool print_json = false;
    unsigned threads = 0;
};

struct AxisSpec {
    double lo = 0.0, hi = 1.0;
    int n = 41;
};

AxisSpec parse_axis(const std::string& text) {
    AxisSpec axis;
    std::size_t c1 = text.find(':');
    std::size_t c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw condpath::ParseError("axis spec must be lo:hi:count", 0);
    axis.lo = std::stod(text.substr(0, c1));
    axis.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    axis.n = std::stoi(text.substr(c2 + 1));
    if (axis.n < 1) throw condpath::ParseError("axis count must be >= 1", 0);
    return axis;
}

std::pair<double, double> parse_range(const std::string& text) {
    std::size_t c = text.find(':');
    if (c == std::string::npos)
        throw condpath::ParseError("range must be lo:hi", 0);
    return {std::stod(text.substr(0, c)), std::stod(text.substr(c + 1))};
}

void write_file(const GlobalOpts& g, const std::string& name,
                const std::string& payload) {
    std::filesystem::create_directories(g.out_dir);
    std::ofstream out(std::filesystem::path(g.out_dir) / name, std::ios::binary);
    out << payload;
    if (!out) throw condpath::Error("cannot write " + name + " under " + g.out_dir);
}

void emit_json(const GlobalOpts& g, const std::string& name, RunManifest manifest,
               nlohmann::json payload, double wall_ms) {
    manifest.wall_time_ms = wall_ms;
    payload["manifest"] = manifest.to_json();
    std::string text = payload.dump(2) + "\n";
    write_file(g, name, text);
    if (g.print_json) std::cout << text;
    else std::cout << g.out_dir << "/" << name << "\n";
}

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run(int argc, char** argv) {
    CLI::App app{"conditioned-trajectory analysis for small-noise Markov processes"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    app.add_flag("--json", g.print_json, "print JSON payloads to stdout");
    app.add_option("--threads", g.threads,
                   "worker threads (default: CONDPATH_THREADS or 1)");

    std::string model_text, rate_text, x_axis, p_axis, v_axis, range_text;
    double b = 0.0, T = 1.0, window = 0.05, step = 1e-3;
    long n_noise = 1, paths = 10000;
    int grid_n = 1001;
    bool force_bisection = false;

    auto* cmd_h = app.add_subcommand("hamiltonian", "H(x,p) on a grid -> CSV");
    cmd_h->add_option("--model", model_text)->required();
    cmd_h->add_option("--x", x_axis, "x grid lo:hi:count")->required();
    cmd_h->add_option("--p", p_axis, "p grid lo:hi:count")->required();

    auto* cmd_l = app.add_subcommand("lagrangian", "L(x,v) on a grid -> CSV");
    cmd_l->add_option("--model", model_text)->required();
    cmd_l->add_option("--x", x_axis, "x grid lo:hi:count")->required();
    cmd_l->add_option("--v", v_axis, "v grid lo:hi:count")->required();

    auto* cmd_t = app.add_subcommand(
        "trajectory", "optimal trajectories into (b, T), one CSV per minimizer");
    cmd_t->add_option("--model", model_text)->required();
    cmd_t->add_option("--rate", rate_text)->required();
    cmd_t->add_option("--b", b)->required();
    cmd_t->add_option("--T", T)->required();
    cmd_t->add_option("--grid", grid_n, "samples per trajectory");

    auto* cmd_p = app.add_subcommand("profile", "cost profile E_{b,T}(A) -> JSON");
    cmd_p->add_option("--model", model_text)->required();
    cmd_p->add_option("--rate", rate_text)->required();
    cmd_p->add_option("--b", b)->required();
    cmd_p->add_option("--T", T)->required();
    cmd_p->add_option("--range", range_text, "profile range lo:hi");
    cmd_p->add_option("--grid", grid_n, "grid points");

    auto* cmd_c = app.add_subcommand("critical", "critical time -> JSON");
    cmd_c->add_option("--model", model_text)->required();
    cmd_c->add_option("--rate", rate_text)->required();
    cmd_c->add_flag("--bisection", force_bisection, "skip the closed form");

    auto* cmd_b = app.add_subcommand("badscan", "bad points at horizon T -> JSON");
    cmd_b->add_option("--model", model_text)->required();
    cmd_b->add_option("--rate", rate_text)->required();
    cmd_b->add_option("--T", T)->required();
    cmd_b->add_option("--range", range_text, "terminal scan range lo:hi");

    auto* cmd_m = app.add_subcommand("mc", "finite-noise conditioning check -> JSON");
    cmd_m->add_option("--model", model_text)->required();
    cmd_m->add_option("--rate", rate_text)->required();
    cmd_m->add_option("--b", b)->required();
    cmd_m->add_option("--T", T)->required();
    cmd_m->add_option("--n", n_noise, "noise parameter")->required();
    cmd_m->add_option("--paths", paths)->capture_default_str();
    cmd_m->add_option("--window", window, "terminal half-width")->capture_default_str();
    cmd_m->add_option("--step", step, "diffusion time step")->capture_default_str();

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    Stopwatch clock;

    if (*cmd_h || *cmd_l) {
        bool hamiltonian_mode = static_cast<bool>(*cmd_h);
        auto model = condpath::parse_model(model_text);
        AxisSpec xs = parse_axis(x_axis);
        AxisSpec ys = parse_axis(hamiltonian_mode ? p_axis : v_axis);
        std::vector<std::array<double, 3>> rows;
        rows.reserve(static_cast<std::size_t>(xs.n) * ys.n);
        for (int i = 0; i < xs.n; ++i) {
            double x = xs.n == 1 ? xs.lo : xs.lo + (xs.hi - xs.lo) * i / (xs.n - 1);
            for (int j = 0; j < ys.n; ++j) {
                double y = ys.n == 1 ? ys.lo : ys.lo + (ys.hi - ys.lo) * j / (ys.n - 1);
                double value = hamiltonian_mode
                                   ? condpath::hamiltonian(model, x, y)
                                   : condpath::lagrangian(model, x, y);
                rows.push_back({x, y, value});
            }
        }
        RunManifest manifest{hamiltonian_mode ? "hamiltonian" : "lagrangian",
                             {{"model", model_text},
                              {"x", x_axis},
                              {hamiltonian_mode ? "p" : "v",
                               hamiltonian_mode ? p_axis : v_axis}},
                             g.seed};
        std::string name = hamiltonian_mode ? "hamiltonian.csv" : "lagrangian.csv";
        write_file(g, name,
                   condpath::surface_csv(hamiltonian_mode ? "x,p,H" : "x,v,L", rows,
                                         manifest.config_hash()));
        std::cout << g.out_dir << "/" << name << "\n";
        return 0;
    }

    if (*cmd_t) {
        auto model = condpath::parse_model(model_text);
        auto rate = condpath::parse_rate(rate_text);
        auto profile = condpath::build_profile(model, rate, b, T, std::nullopt, g.threads);
        RunManifest manifest{
            "trajectory",
            {{"model", model_text}, {"rate", rate_text}, {"b", b}, {"T", T}, {"grid", grid_n}},
            g.seed};
        nlohmann::json payload;
        payload["b"] = b;
        payload["T"] = T;
        payload["trajectories"] = nlohmann::json::array();
        int index = 0;
        for (double A : profile.global_minimizers) {
            condpath::Trajectory traj =
                model.kind == condpath::ModelKind::GeneralDrift
                    ? condpath::shoot_bvp(model, A, b, T).front()
                    : condpath::el_closed_form(model, A, b, T, grid_n);
            condpath::attach_initial_cost(traj, rate);
            std::string name = "trajectory_" + std::to_string(index++) + ".csv";
            write_file(g, name, condpath::trajectory_csv(traj, manifest.config_hash()));
            auto summary = condpath::trajectory_summary(traj);
            summary["file"] = name;
            payload["trajectories"].push_back(summary);
        }
        emit_json(g, "trajectory.json", manifest, payload, clock.ms());
        return 0;
    }

    if (*cmd_p) {
        auto model = condpath::parse_model(model_text);
        auto rate = condpath::parse_rate(rate_text);
        std::optional<condpath::GridSpec> gs;
        if (!range_text.empty()) {
            auto [lo, hi] = parse_range(range_text);
            gs = condpath::GridSpec{lo, hi, grid_n};
        }
        auto profile = condpath::build_profile(model, rate, b, T, gs, g.threads);
        auto prediction = condpath::predict_conditional_limit(profile);
        RunManifest manifest{
            "profile",
            {{"model", model_text}, {"rate", rate_text}, {"b", b}, {"T", T},
             {"range", range_text}, {"grid", grid_n}},
            g.seed};
        emit_json(g, "profile.json", manifest,
                  condpath::profile_report(profile, prediction), clock.ms());
        return 0;
    }

    if (*cmd_c) {
        auto model = condpath::parse_model(model_text);
        auto rate = condpath::parse_rate(rate_text);
        auto crit = condpath::critical_time(model, rate, force_bisection);
        RunManifest manifest{"critical",
                             {{"model", model_text},
                              {"rate", rate_text},
                              {"bisection", force_bisection}},
                             g.seed};
        nlohmann::json payload;
        payload["critical_time"] = {{"value", crit.value}, {"method", crit.method}};
        emit_json(g, "critical.json", manifest, payload, clock.ms());
        return 0;
    }

    if (*cmd_b) {
        auto model = condpath::parse_model(model_text);
        auto rate = condpath::parse_rate(rate_text);
        std::optional<std::pair<double, double>> range;
        if (!range_text.empty()) range = parse_range(range_text);
        auto report = condpath::build_bad_point_report(model, rate, T, range);
        RunManifest manifest{
            "badscan",
            {{"model", model_text}, {"rate", rate_text}, {"T", T}, {"range", range_text}},
            g.seed};
        emit_json(g, "badscan.json", manifest,
                  condpath::bad_point_report_json(report), clock.ms());
        return report.inconclusive_cells.empty() ? 0 : 2;
    }

    if (*cmd_m) {
        condpath::McConfig cfg;
        cfg.model = condpath::parse_model(model_text);
        cfg.rate = condpath::parse_rate(rate_text);
        cfg.T = T;
        cfg.n = n_noise;
        cfg.paths = paths;
        cfg.b = b;
        cfg.window = window;
        cfg.step = step;
        cfg.seed = g.seed;
        cfg.threads = g.threads;
        auto profile = condpath::build_profile(cfg.model, cfg.rate, b, T,
                                               std::nullopt, g.threads);
        auto prediction = condpath::predict_conditional_limit(profile);
        RunManifest manifest{"mc",
                             {{"model", model_text},
                              {"rate", rate_text},
                              {"b", b},
                              {"T", T},
                              {"n", n_noise},
                              {"paths", paths},
                              {"window", window},
                              {"step", step}},
                             g.seed};
        condpath::McThresholds thresholds;
        try {
            auto [emp, verdict] = condpath::condition_and_compare(cfg, prediction, thresholds);
            write_file(g, "mc_accepted.csv",
                       condpath::accepted_starts_csv(emp, manifest.config_hash()));
            emit_json(g, "mc.json", manifest,
                      condpath::mc_report(cfg, emp, verdict, thresholds, prediction),
                      clock.ms());
            return 0;
        } catch (const condpath::UnderpoweredError& e) {
            nlohmann::json payload;
            payload["error"] = "underpowered";
            payload["accepted"] = e.accepted;
            payload["detail"] = e.what();
            emit_json(g, "mc.json", manifest, payload, clock.ms());
            return 2;
        }
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const condpath::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const condpath::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
