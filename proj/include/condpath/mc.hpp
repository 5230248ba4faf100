#ifndef CONDPATH_MC_HPP
#define CONDPATH_MC_HPP

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "condpath/cost_profile.hpp"
#include "condpath/process_model.hpp"
#include "condpath/rate_function.hpp"

namespace condpath {

struct McConfig {
    ProcessModel model;
    RateFunction rate;
    double T = 1.0;
    long n = 1;           // noise parameter (rate of the LDP)
    long paths = 10000;
    double b = 0.0;       // terminal window center
    double window = 0.05; // half width
    double step = 1e-3;   // Euler-Maruyama step (ignored for jump kinds)
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct McThresholds {
    double point_mass_min = 0.8;   // mass within rho of the predicted point
    double pair_min = 0.3;         // mass per ball for a symmetric pair
    double pair_imbalance = 0.3;   // |mass difference| bound
    double radius_cap = 0.25;
    long min_accepted = 100;
};

struct ConditionedEmpirical {
    long accepted = 0;
    double acceptance_rate = 0.0;
    std::vector<long> path_indices;   // sorted
    std::vector<double> starts;       // X_0 of accepted paths, by path index
    std::vector<double> terminals;    // X_T of accepted paths, by path index
    double radius = 0.0;
    std::map<double, double> mass_near;  // predicted location -> empirical mass
};

struct McVerdict {
    bool pass = false;
    std::string detail;
};

// Draw from mu_n (density proportional to exp(-n i(x))) by rejection
// against a uniform envelope on a computed compact support. Deterministic
// given the seed. Throws EnvelopeFailureError when acceptance collapses.
std::vector<double> sample_initial(const RateFunction& rate, long n, long count,
                                   std::uint64_t seed);

// Support interval [x_lo, x_hi] outside which i(x) >= min i + 40/n.
std::pair<double, double> initial_support(const RateFunction& rate, long n);

// One path: Euler-Maruyama with noise scale 1/sqrt(n) for diffusions, exact
// event-driven jumps of +-1/n at rates n b(x), n d(x) for birth-death kinds.
// With a non-null path pointer the full (t, x) history is recorded.
double simulate_terminal(const ProcessModel& m, long n, double x0, double T,
                         double step, std::mt19937_64& rng,
                         std::vector<std::pair<double, double>>* path = nullptr);

// Keep paths with |X_T - b| <= window and compare the empirical start
// distribution against the prediction. Throws UnderpoweredError when fewer
// than thresholds.min_accepted paths survive.
std::pair<ConditionedEmpirical, McVerdict> condition_and_compare(
    const McConfig& cfg, const ConditionalLimitPrediction& prediction,
    const McThresholds& thresholds = {});

}  // namespace condpath

#endif
