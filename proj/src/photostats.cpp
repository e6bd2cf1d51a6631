#include "pnrdisc/photostats.hpp"

#include <algorithm>
#include <cmath>

namespace pnrdisc {

namespace {

// Mass the model would push past the end of the window is absorbed in the
// last bin, so the transform conserves probability over the window.

std::vector<double> afterpulse_order2(const std::vector<double>& pmf, double p_ap) {
    const size_t n = pmf.size();
    const size_t last = n - 1;
    std::vector<double> out(pmf);
    for (size_t j = 1; j < n; ++j) {
        if (pmf[j] <= 0.0) continue;
        double g1 = static_cast<double>(j) * p_ap * pmf[j];
        double g2 = 0.5 * static_cast<double>(j) * static_cast<double>(j + 1) * p_ap * p_ap * pmf[j];
        double donated = g1 + g2;
        if (donated > pmf[j]) {
            // The truncated expansion is only meaningful for j*p_ap < 1; far
            // tail bins cannot donate more than they hold.
            const double scale = pmf[j] / donated;
            g1 *= scale;
            g2 *= scale;
            donated = pmf[j];
        }
        out[j] -= donated;
        out[std::min(j + 1, last)] += g1;
        out[std::min(j + 2, last)] += g2;
    }
    return out;
}

std::vector<double> afterpulse_cascade(const std::vector<double>& pmf, double p_ap) {
    const size_t n = pmf.size();
    const size_t last = n - 1;
    const double q = 1.0 - p_ap;
    std::vector<double> out(n, 0.0);
    out[0] = pmf[0];
    for (size_t k = 1; k < n; ++k) {
        const double mass = pmf[k];
        if (mass <= 0.0) continue;
        // Total count given k primaries is k plus the spawned afterpulses:
        // negative binomial, nb(t;k) = C(t-1,k-1) p_ap^(t-k) q^k for t >= k.
        double w = std::pow(q, static_cast<double>(k));
        long double cum = 0.0L;
        for (size_t t = k; t < last; ++t) {
            out[t] += mass * w;
            cum += w;
            w *= p_ap * static_cast<double>(t) / static_cast<double>(t - k + 1);
            if (w < 1e-300) break;  // within-window terms are spent
        }
        // Whatever the chain did not place inside the window lies past it.
        const double rest = static_cast<double>(1.0L - cum);
        if (rest > 0.0) out[last] += mass * rest;
    }
    return out;
}

std::vector<double> afterpulse_apply(const std::vector<double>& pmf, double p_ap,
                                     AfterpulseModel model) {
    if (p_ap == 0.0) return pmf;
    return model == AfterpulseModel::Order2 ? afterpulse_order2(pmf, p_ap)
                                            : afterpulse_cascade(pmf, p_ap);
}

}  // namespace

std::string to_string(AfterpulseModel model) {
    return model == AfterpulseModel::Order2 ? "order2" : "cascade";
}

AfterpulseModel afterpulse_model_from_string(const std::string& name) {
    if (name == "order2") return AfterpulseModel::Order2;
    if (name == "cascade") return AfterpulseModel::Cascade;
    throw std::invalid_argument("ap_model: unknown model '" + name + "'");
}

double displaced_mean(const Alphabet& alphabet, Hypothesis h, double beta, double xi) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("displaced_mean: beta must be finite and >= 0");
    if (!(xi >= 0.0 && xi <= 1.0))
        throw std::invalid_argument("displaced_mean: xi must be in [0,1]");
    const double a = state_amplitude(alphabet, h);
    const double interference = 2.0 * xi * a * beta;
    const bool constructive = alphabet.kind == AlphabetKind::Bpsk && h == Hypothesis::H1;
    const double mean = a * a + beta * beta + (constructive ? interference : -interference);
    return std::max(mean, 0.0);
}

double apply_efficiency_and_darks(double mean, const NoiseModel& noise) {
    if (!(mean >= 0.0)) throw std::invalid_argument("apply_efficiency_and_darks: mean must be >= 0");
    return noise.eta * mean + noise.nu;
}

double detected_mean(const ReceiverConfig& config, Hypothesis h) {
    return apply_efficiency_and_darks(
        displaced_mean(config.alphabet, h, config.beta, config.noise.xi), config.noise);
}

MeanPhotonPair detected_means(const ReceiverConfig& config) {
    return {detected_mean(config, Hypothesis::H0), detected_mean(config, Hypothesis::H1)};
}

std::vector<double> untruncated_pmf(double mean, int k_max) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("untruncated_pmf: mean must be finite and >= 0");
    if (k_max < 0) throw std::invalid_argument("untruncated_pmf: k_max must be >= 0");
    std::vector<double> pmf(static_cast<size_t>(k_max) + 1, 0.0);
    if (mean == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (mean < 690.0) {
        double v = std::exp(-mean);
        pmf[0] = v;
        for (int k = 1; k <= k_max; ++k) {
            v *= mean / static_cast<double>(k);
            pmf[static_cast<size_t>(k)] = v;
        }
    } else {
        // exp(-mean) underflows; evaluate each bin in the log domain.
        const double log_mean = std::log(mean);
        for (int k = 0; k <= k_max; ++k) {
            pmf[static_cast<size_t>(k)] =
                std::exp(static_cast<double>(k) * log_mean - mean - std::lgamma(static_cast<double>(k) + 1.0));
        }
    }
    return pmf;
}

std::vector<double> afterpulse_transform(const std::vector<double>& pmf, double p_ap,
                                         AfterpulseModel model) {
    if (pmf.empty()) throw std::invalid_argument("afterpulse_transform: empty pmf");
    if (!(p_ap >= 0.0 && p_ap < 1.0))
        throw std::invalid_argument("afterpulse_transform: p_ap must be in [0,1)");
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0)) throw std::invalid_argument("afterpulse_transform: negative pmf entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("afterpulse_transform: pmf is not normalized");
    return afterpulse_apply(pmf, p_ap, model);
}

CountDistribution count_distribution(const ReceiverConfig& config, Hypothesis h,
                                     const CountOptions& options) {
    config.validate();
    const int m = config.resolution.m;
    const double lam = detected_mean(config, h);

    int cutoff = m + std::max(options.cutoff_extra, 4);
    std::vector<double> raw = untruncated_pmf(lam, cutoff);

    double low_raw = 0.0;
    for (int k = 0; k < m; ++k) low_raw += raw[static_cast<size_t>(k)];

    if (low_raw >= 0.5) {
        // The m+ bin will be a direct tail sum; extend the window until the
        // raw tail has converged relative to what it holds.
        double tail = 0.0;
        for (int k = m; k <= cutoff; ++k) tail += raw[static_cast<size_t>(k)];
        const int hard_cap = cutoff + 600;
        while (cutoff < hard_cap) {
            const double last = raw.back();
            if (last <= 1e-18 * std::max(tail, 1e-300)) break;
            ++cutoff;
            raw.push_back(last * lam / static_cast<double>(cutoff));
            tail += raw.back();
        }
    }

    const std::vector<double> work = (config.noise.p_ap > 0.0)
                                         ? afterpulse_apply(raw, config.noise.p_ap, options.ap_model)
                                         : std::move(raw);

    CountDistribution dist;
    dist.m = m;
    dist.probs.assign(static_cast<size_t>(m) + 1, 0.0);
    double low = 0.0;
    for (int k = 0; k < m; ++k) {
        dist.probs[static_cast<size_t>(k)] = work[static_cast<size_t>(k)];
        low += work[static_cast<size_t>(k)];
    }
    if (low < 0.5) {
        dist.probs[static_cast<size_t>(m)] = 1.0 - low;
    } else {
        double tail = 0.0;
        for (size_t t = static_cast<size_t>(m); t < work.size(); ++t) tail += work[t];
        dist.probs[static_cast<size_t>(m)] = tail;
    }
    return dist;
}

}  // namespace pnrdisc
