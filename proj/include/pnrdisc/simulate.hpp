#pragma once

#include <cstdint>
#include <vector>

#include "pnrdisc/decision.hpp"
#include "pnrdisc/model.hpp"
#include "pnrdisc/rng.hpp"

// Monte Carlo receiver: per-trial photon counts from the exact generative
// noise model (Poisson primaries, cascade afterpulsing), MAP decision against
// the analytic distributions, binomial error statistics.

namespace pnrdisc {

struct ErrorEstimate {
    double p_hat = 0.0;   // observed error fraction
    double sigma = 0.0;   // binomial 1-sigma: sqrt(p_hat (1 - p_hat) / trials)
    long errors = 0;
    long trials = 0;
    uint64_t seed = 0;
};

// Trial counts per mean-photon-number band, mirroring how the experimental
// runs scale the number of experiments with power.
struct RunPlan {
    struct Band {
        double alpha_sq_max = 0.0;  // band applies to alpha_sq <= this bound
        long trials = 0;
    };
    std::vector<Band> bands;  // ascending alpha_sq_max; a final catch-all is implied
    int runs = 5;

    long trials_for(double alpha_sq) const;

    // Per-run trial counts from the experimental campaign: flat 1e5 for
    // PNR(1), growing with power up to 5e5 / 3e6 / 8e6 for PNR(2..4).
    static RunPlan experiment_default(int m);
};

struct SimOptions {
    CountOptions decision_count;       // distributions arming the MAP rule
    bool override_decision_priors = false;
    Priors decision_priors;            // used only when override flag is set
    int threads = 1;
};

// One trial's detector outcome: Poisson primaries at the detected mean, then
// each click spawns further clicks with probability p_ap (cascade), then
// truncation at m.
int sample_counts(const ReceiverConfig& config, Hypothesis h, Xoshiro256StarStar& rng);

// n_trials independent trials: draw the hypothesis from the priors, sample
// counts, decide via the precomputed MAP table, count errors.
// Bit-reproducible for fixed (config, n_trials, seed) at any thread count.
ErrorEstimate run_trials(const ReceiverConfig& config, long n_trials, uint64_t seed,
                         const SimOptions& options = {});

struct ExperimentPoint {
    ReceiverConfig config;
    std::vector<ErrorEstimate> runs;
    double pooled_mean = 0.0;
    double stddev_runs = 0.0;     // sample standard deviation across runs
    double sigma_binomial = 0.0;  // pooled binomial 1-sigma over all trials
    long total_trials = 0;
};

// `plan.runs` independent run_trials per config. Run r of every config uses
// seed = base_seed + r * seed_step (seed_step = 0 forces identical runs).
std::vector<ExperimentPoint> run_experiment(const RunPlan& plan,
                                            const std::vector<ReceiverConfig>& configs,
                                            uint64_t base_seed, uint64_t seed_step = 1,
                                            const SimOptions& options = {});

}  // namespace pnrdisc
