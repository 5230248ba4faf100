#include "condpath/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "condpath/errors.hpp"
#include "condpath/numerics.hpp"
#include "condpath/parallel.hpp"

namespace condpath {

namespace {

double rate_min_value(const RateFunction& rate) {
    if (rate.kind == RateKind::OscillatoryIntegral) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : minima_of_i(rate)) best = std::min(best, m.value);
    return best;
}

// outward search for the first x with i(x) >= threshold
double support_edge(const RateFunction& rate, double from, double threshold,
                    double direction) {
    double step = 0.5;
    double x = from;
    while (eval_i(rate, x) < threshold) {
        x += direction * step;
        step *= 2.0;
        if (std::abs(x) > 1e6)
            throw EnvelopeFailureError("initial rate function is not coercive enough");
    }
    double lo = std::min(from, x), hi = std::max(from, x);
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        bool inside = eval_i(rate, mid) < threshold;
        if (direction > 0.0)
            (inside ? lo : hi) = mid;
        else
            (inside ? hi : lo) = mid;
    }
    return direction > 0.0 ? hi : lo;
}

}  // namespace

std::pair<double, double> initial_support(const RateFunction& rate, long n) {
    double i_min = rate_min_value(rate);
    double threshold = i_min + 40.0 / static_cast<double>(n);
    double anchor_lo = 0.0, anchor_hi = 0.0;
    if (rate.kind != RateKind::OscillatoryIntegral) {
        for (const auto& m : minima_of_i(rate)) {
            anchor_lo = std::min(anchor_lo, m.location);
            anchor_hi = std::max(anchor_hi, m.location);
        }
    }
    double hi = support_edge(rate, anchor_hi, threshold, +1.0);
    double lo = support_edge(rate, anchor_lo, threshold, -1.0);
    return {lo, hi};
}

std::vector<double> sample_initial(const RateFunction& rate, long n, long count,
                                   std::uint64_t seed) {
    if (n < 1) throw DomainError("noise parameter n must be a positive integer");
    auto [lo, hi] = initial_support(rate, n);
    double i_min = rate_min_value(rate);

    std::vector<double> samples(count);
    std::atomic<long> rejected_hard{0};
    parallel_for(static_cast<std::size_t>(count), 0, [&](std::size_t idx) {
        std::mt19937_64 rng(derive_stream_seed(seed, idx));
        std::uniform_real_distribution<double> ux(lo, hi);
        std::uniform_real_distribution<double> uy(0.0, 1.0);
        for (long tries = 0;; ++tries) {
            if (tries > 2000000) {
                rejected_hard.fetch_add(1);
                samples[idx] = std::numeric_limits<double>::quiet_NaN();
                return;
            }
            double x = ux(rng);
            double density = std::exp(-static_cast<double>(n) * (eval_i(rate, x) - i_min));
            if (uy(rng) < density) {
                samples[idx] = x;
                return;
            }
        }
    });
    if (rejected_hard.load() > 0)
        throw EnvelopeFailureError(
            "rejection acceptance below 1e-6; enlarge the support or rescale n");
    return samples;
}

double simulate_terminal(const ProcessModel& m, long n, double x0, double T,
                         double step, std::mt19937_64& rng,
                         std::vector<std::pair<double, double>>* path) {
    if (!m.in_state_space(x0)) throw DomainError("x0 outside the state space");
    if (path) path->push_back({0.0, x0});
    if (m.is_diffusion()) {
        if (!(step > 0.0)) throw DomainError("time step must be positive");
        double noise = 1.0 / std::sqrt(static_cast<double>(n));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double x = x0, t = 0.0;
        while (t < T) {
            double dt = std::min(step, T - t);
            x += m.drift(x) * dt + noise * std::sqrt(dt) * gauss(rng);
            t += dt;
            if (path) path->push_back({t, x});
        }
        return x;
    }
    // exact event-driven jump walk: +-1/N at rates N b(x), N d(x)
    double N = static_cast<double>(n);
    auto [lo, hi] = m.state_space();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    double x = x0, t = 0.0;
    while (true) {
        double rb = std::max(0.0, m.birth(x)), rd = std::max(0.0, m.death(x));
        double total = N * (rb + rd);
        if (total <= 0.0) return x;  // absorbed
        t += expo(rng) / total;
        if (t >= T) return x;
        if (uniform(rng) * (rb + rd) < rb)
            x = std::min(hi, x + 1.0 / N);
        else
            x = std::max(lo, x - 1.0 / N);
        if (path) path->push_back({t, x});
    }
}

std::pair<ConditionedEmpirical, McVerdict> condition_and_compare(
    const McConfig& cfg, const ConditionalLimitPrediction& prediction,
    const McThresholds& thresholds) {
    if (!(cfg.window > 0.0)) throw DomainError("terminal window must be positive");
    if (cfg.paths < 1) throw DomainError("need at least one path");

    std::vector<double> starts = sample_initial(cfg.rate, cfg.n, cfg.paths, cfg.seed);
    std::vector<double> terminals(cfg.paths);
    parallel_for(static_cast<std::size_t>(cfg.paths), cfg.threads, [&](std::size_t idx) {
        std::mt19937_64 rng(derive_stream_seed(cfg.seed ^ 0x5D5ECCA4u, idx));
        terminals[idx] = simulate_terminal(cfg.model, cfg.n, starts[idx], cfg.T,
                                           cfg.step, rng);
    });

    ConditionedEmpirical emp;
    for (long i = 0; i < cfg.paths; ++i) {
        if (std::abs(terminals[i] - cfg.b) <= cfg.window) {
            emp.path_indices.push_back(i);
            emp.starts.push_back(starts[i]);
            emp.terminals.push_back(terminals[i]);
        }
    }
    emp.accepted = static_cast<long>(emp.starts.size());
    emp.acceptance_rate =
        static_cast<double>(emp.accepted) / static_cast<double>(cfg.paths);
    if (emp.accepted < thresholds.min_accepted)
        throw UnderpoweredError(
            "only " + std::to_string(emp.accepted) + " of " +
                std::to_string(cfg.paths) +
                " paths hit the terminal window; increase paths or the window",
            emp.accepted);

    // ball radius: half the minimal gap between predicted locations, capped
    double radius = thresholds.radius_cap;
    for (std::size_t i = 0; i < prediction.locations.size(); ++i)
        for (std::size_t j = i + 1; j < prediction.locations.size(); ++j)
            radius = std::min(radius, 0.5 * std::abs(prediction.locations[i] -
                                                     prediction.locations[j]));
    emp.radius = radius;
    for (double loc : prediction.locations) {
        long inside = 0;
        for (double s : emp.starts)
            if (std::abs(s - loc) <= radius) ++inside;
        emp.mass_near[loc] =
            static_cast<double>(inside) / static_cast<double>(emp.accepted);
    }

    McVerdict verdict;
    char buf[256];
    switch (prediction.kind) {
        case PredictionKind::PointMass: {
            double mass = emp.mass_near.begin()->second;
            verdict.pass = mass >= thresholds.point_mass_min;
            std::snprintf(buf, sizeof buf, "mass %.4f within %.3g of %.6g (need >= %.2f)",
                          mass, radius, prediction.locations[0],
                          thresholds.point_mass_min);
            verdict.detail = buf;
            break;
        }
        case PredictionKind::SymmetricPair: {
            double m0 = emp.mass_near.begin()->second;
            double m1 = emp.mass_near.rbegin()->second;
            verdict.pass = m0 >= thresholds.pair_min && m1 >= thresholds.pair_min &&
                           std::abs(m0 - m1) <= thresholds.pair_imbalance;
            std::snprintf(buf, sizeof buf,
                          "masses %.4f / %.4f (need >= %.2f each, imbalance <= %.2f)",
                          m0, m1, thresholds.pair_min, thresholds.pair_imbalance);
            verdict.detail = buf;
            break;
        }
        case PredictionKind::Multi: {
            double total = 0.0;
            for (const auto& [loc, mass] : emp.mass_near) total += mass;
            verdict.pass = total >= thresholds.point_mass_min;
            std::snprintf(buf, sizeof buf,
                          "combined mass %.4f over %zu balls (need >= %.2f)", total,
                          emp.mass_near.size(), thresholds.point_mass_min);
            verdict.detail = buf;
            break;
        }
    }
    return {emp, verdict};
}

}  // namespace condpath
