#include "pnrdisc/model.hpp"

#include <numeric>

namespace pnrdisc {

std::string to_string(AlphabetKind kind) {
    switch (kind) {
        case AlphabetKind::Bpsk: return "bpsk";
        case AlphabetKind::OokPeak: return "ook_peak";
        case AlphabetKind::OokAvg: return "ook_avg";
    }
    throw std::logic_error("unreachable alphabet kind");
}

AlphabetKind alphabet_kind_from_string(const std::string& name) {
    if (name == "bpsk") return AlphabetKind::Bpsk;
    if (name == "ook_peak" || name == "ook1") return AlphabetKind::OokPeak;
    if (name == "ook_avg" || name == "ook2") return AlphabetKind::OokAvg;
    throw std::invalid_argument("alphabet: unknown kind '" + name + "'");
}

double state_amplitude(const Alphabet& alphabet, Hypothesis h) {
    switch (alphabet.kind) {
        case AlphabetKind::Bpsk:
            return alphabet.alpha;
        case AlphabetKind::OokPeak:
            return h == Hypothesis::H1 ? alphabet.alpha : 0.0;
        case AlphabetKind::OokAvg:
            return h == Hypothesis::H1 ? std::sqrt(2.0) * alphabet.alpha : 0.0;
    }
    throw std::logic_error("unreachable alphabet kind");
}

double state_mean_photons(const Alphabet& alphabet, Hypothesis h) {
    // Computed from alpha^2 directly so OokAvg is exactly 2*alpha^2.
    switch (alphabet.kind) {
        case AlphabetKind::Bpsk:
            return alphabet.alpha * alphabet.alpha;
        case AlphabetKind::OokPeak:
            return h == Hypothesis::H1 ? alphabet.alpha * alphabet.alpha : 0.0;
        case AlphabetKind::OokAvg:
            return h == Hypothesis::H1 ? 2.0 * alphabet.alpha * alphabet.alpha : 0.0;
    }
    throw std::logic_error("unreachable alphabet kind");
}

void NoiseModel::validate() const {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("noise: xi must be in [0,1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("noise: eta must be in (0,1]");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("noise: nu must be finite and >= 0");
    if (!(p_ap >= 0.0 && p_ap < 1.0)) throw std::invalid_argument("noise: p_ap must be in [0,1)");
}

void ReceiverConfig::validate() const {
    if (!(alphabet.alpha >= 0.0) || !std::isfinite(alphabet.alpha))
        throw std::invalid_argument("alphabet: alpha must be finite and >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("config: beta must be finite and >= 0");
    if (resolution.m < 1) throw std::invalid_argument("resolution: m must be >= 1");
    noise.validate();
    if (!(priors.p_h1 >= 0.0 && priors.p_h1 <= 1.0))
        throw std::invalid_argument("priors: p_h1 must be in [0,1]");
}

double CountDistribution::sum() const {
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

}  // namespace pnrdisc
