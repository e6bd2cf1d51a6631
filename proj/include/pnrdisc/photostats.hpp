#pragma once

#include <vector>

#include "pnrdisc/model.hpp"

// Conditional PNR count statistics under the full imperfection chain:
// visibility-degraded displacement -> efficiency -> dark counts ->
// afterpulsing -> truncation at the detector resolution.

namespace pnrdisc {

enum class AfterpulseModel {
    // Truncated transformation: each bin k donates k*p_ap of its mass one
    // bin up and C(k+1,2)*p_ap^2 two bins up, the second-order expansion of
    // the cascade, with the donated mass removed from the source bin so the
    // pmf stays normalized.
    Order2,
    // Exact branching model: every click (primary or afterpulse) spawns one
    // further afterpulse with probability p_ap, so each primary click starts
    // a geometric chain. The total count given n primaries is negative
    // binomial. This is the generative model used by the Monte Carlo sampler.
    Cascade,
};

std::string to_string(AfterpulseModel model);
AfterpulseModel afterpulse_model_from_string(const std::string& name);

// Mean photon number of the displaced state for one hypothesis.
// BPSK:  <n>+- = alpha^2 + beta^2 +- 2 xi alpha beta  (+ for H1, - for H0).
// OOK:   a^2 + beta^2 - 2 xi a beta with a the state amplitude (nulling
//        convention; beta = 0 reduces to direct detection).
// Clamped at 0 from below against floating-point rounding.
double displaced_mean(const Alphabet& alphabet, Hypothesis h, double beta, double xi);

// Detected mean: eta * mean + nu. Linear loss keeps a coherent state
// coherent and dark counts are an independent Poisson process, so the
// detected counts stay Poisson with this mean.
double apply_efficiency_and_darks(double mean, const NoiseModel& noise);

// Full composition displaced_mean -> apply_efficiency_and_darks for a config.
double detected_mean(const ReceiverConfig& config, Hypothesis h);

// Detected-mode mean photon numbers for both hypotheses.
struct MeanPhotonPair {
    double n_h0 = 0.0;
    double n_h1 = 0.0;
};
MeanPhotonPair detected_means(const ReceiverConfig& config);

// Poisson pmf values for k = 0..k_max. Multiplicative recurrence for
// ordinary means, log-domain for means large enough that exp(-mean)
// underflows; safe at mean = 100, k = 100 and far beyond.
std::vector<double> untruncated_pmf(double mean, int k_max);

// Applies afterpulsing to a normalized pmf over counts 0..K. The output has
// the same length and is normalized: mass that the model pushes past the
// last bin is absorbed there. Rejects input with |sum - 1| > 1e-9.
std::vector<double> afterpulse_transform(const std::vector<double>& pmf, double p_ap,
                                         AfterpulseModel model);

struct CountOptions {
    AfterpulseModel ap_model = AfterpulseModel::Cascade;
    // Internal Poisson cutoff K = m + cutoff_extra; extended automatically
    // when the truncated tail still carries weight relative to the output.
    int cutoff_extra = 40;
};

// Conditional distribution over detector outcomes {0,...,m-1,m+} for one
// hypothesis. The m+ bin is the complement 1 - sum_{l<m} P(l) when that is
// the numerically accurate route (tail >= 1/2) and a direct tail sum
// otherwise, so tiny tail probabilities keep full relative precision.
CountDistribution count_distribution(const ReceiverConfig& config, Hypothesis h,
                                     const CountOptions& options = {});

}  // namespace pnrdisc
