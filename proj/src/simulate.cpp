#include "pnrdisc/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace pnrdisc {

namespace {

// Knuth inversion: count uniforms until their product drops below exp(-mean).
// Only valid while exp(-mean) stays normal, hence the chunking below.
int poisson_knuth(Xoshiro256StarStar& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = rng.uniform();
    while (prod > limit) {
        ++k;
        prod *= rng.uniform();
    }
    return k;
}

int sample_poisson(Xoshiro256StarStar& rng, double mean) {
    int total = 0;
    while (mean > 500.0) {
        // Poisson additivity: split a large mean into exact partial draws.
        total += poisson_knuth(rng, 500.0);
        mean -= 500.0;
    }
    return total + poisson_knuth(rng, mean);
}

struct DecisionTable {
    std::vector<Hypothesis> decide;  // indexed by outcome
    CountDistribution dist_h0;
    CountDistribution dist_h1;

    explicit DecisionTable(const ReceiverConfig& config, const SimOptions& options) {
        const Priors priors = options.override_decision_priors ? options.decision_priors : config.priors;
        dist_h0 = count_distribution(config, Hypothesis::H0, options.decision_count);
        dist_h1 = count_distribution(config, Hypothesis::H1, options.decision_count);
        decide.reserve(static_cast<size_t>(config.resolution.m) + 1);
        for (int k = 0; k <= config.resolution.m; ++k)
            decide.push_back(map_decide(k, dist_h0, dist_h1, priors));
    }
};

}  // namespace

long RunPlan::trials_for(double alpha_sq) const {
    for (const Band& band : bands) {
        if (alpha_sq <= band.alpha_sq_max) return band.trials;
    }
    return bands.empty() ? 100000 : bands.back().trials;
}

RunPlan RunPlan::experiment_default(int m) {
    double max_trials = 1e5;
    if (m == 2) max_trials = 5e5;
    if (m == 3) max_trials = 3e6;
    if (m >= 4) max_trials = 8e6;

    // Geometric interpolation from 1e5 at low power to the per-m maximum
    // above alpha_sq = 10.
    RunPlan plan;
    const double bounds[] = {2.0, 4.0, 6.0, 8.0, 10.0, 1e300};
    const int steps = 6;
    for (int i = 0; i < steps; ++i) {
        const double frac = static_cast<double>(i) / (steps - 1);
        const double trials = 1e5 * std::pow(max_trials / 1e5, frac);
        plan.bands.push_back({bounds[i], static_cast<long>(std::llround(trials))});
    }
    return plan;
}

int sample_counts(const ReceiverConfig& config, Hypothesis h, Xoshiro256StarStar& rng) {
    const double lambda = detected_mean(config, h);
    const int primary = sample_poisson(rng, lambda);
    int total = primary;
    const double p_ap = config.noise.p_ap;
    if (p_ap > 0.0) {
        for (int click = 0; click < primary; ++click) {
            while (rng.uniform() < p_ap) ++total;  // afterpulses spawn afterpulses
        }
    }
    return std::min(total, config.resolution.m);
}

ErrorEstimate run_trials(const ReceiverConfig& config, long n_trials, uint64_t seed,
                         const SimOptions& options) {
    if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
    config.validate();
    const DecisionTable table(config, options);
    const double p_h1 = config.priors.p_h1;

    const auto errors_in = [&](long begin, long end) {
        long errors = 0;
        for (long trial = begin; trial < end; ++trial) {
            Xoshiro256StarStar rng = make_trial_rng(seed, static_cast<uint64_t>(trial));
            const Hypothesis truth = rng.uniform() < p_h1 ? Hypothesis::H1 : Hypothesis::H0;
            const int outcome = sample_counts(config, truth, rng);
            if (table.decide[static_cast<size_t>(outcome)] != truth) ++errors;
        }
        return errors;
    };

    long errors = 0;
    const int threads = std::max(options.threads, 1);
    if (threads == 1 || n_trials < 4096) {
        errors = errors_in(0, n_trials);
    } else {
        // Per-trial streams make the partition irrelevant to the result.
        std::vector<long> partial(static_cast<size_t>(threads), 0);
        std::vector<std::thread> pool;
        const long chunk = (n_trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long begin = t * chunk;
            const long end = std::min(n_trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, t, begin, end] { partial[static_cast<size_t>(t)] = errors_in(begin, end); });
        }
        for (auto& th : pool) th.join();
        for (long e : partial) errors += e;
    }

    ErrorEstimate estimate;
    estimate.errors = errors;
    estimate.trials = n_trials;
    estimate.seed = seed;
    estimate.p_hat = static_cast<double>(errors) / static_cast<double>(n_trials);
    estimate.sigma = std::sqrt(estimate.p_hat * (1.0 - estimate.p_hat) / static_cast<double>(n_trials));
    return estimate;
}

std::vector<ExperimentPoint> run_experiment(const RunPlan& plan,
                                            const std::vector<ReceiverConfig>& configs,
                                            uint64_t base_seed, uint64_t seed_step,
                                            const SimOptions& options) {
    if (configs.empty()) throw std::invalid_argument("run_experiment: no configs");
    if (plan.runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");

    std::vector<ExperimentPoint> points;
    points.reserve(configs.size());
    for (const ReceiverConfig& config : configs) {
        ExperimentPoint point;
        point.config = config;
        const long trials = plan.trials_for(state_mean_photons(config.alphabet, Hypothesis::H1));

        long total_errors = 0;
        for (int r = 0; r < plan.runs; ++r) {
            const uint64_t seed = base_seed + static_cast<uint64_t>(r) * seed_step;
            point.runs.push_back(run_trials(config, trials, seed, options));
            total_errors += point.runs.back().errors;
            point.total_trials += trials;
        }

        double mean = 0.0;
        for (const ErrorEstimate& run : point.runs) mean += run.p_hat;
        mean /= static_cast<double>(plan.runs);
        point.pooled_mean = mean;

        if (plan.runs > 1) {
            double ss = 0.0;
            for (const ErrorEstimate& run : point.runs) ss += (run.p_hat - mean) * (run.p_hat - mean);
            point.stddev_runs = std::sqrt(ss / static_cast<double>(plan.runs - 1));
        }
        const double pooled_p = static_cast<double>(total_errors) / static_cast<double>(point.total_trials);
        point.sigma_binomial = std::sqrt(pooled_p * (1.0 - pooled_p) / static_cast<double>(point.total_trials));
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace pnrdisc
