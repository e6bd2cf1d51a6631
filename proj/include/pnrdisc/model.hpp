#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types for binary coherent-state discrimination with a displaced
// photon-number-resolving receiver. All types are immutable value types in
// spirit: construct, validate, share freely across threads.

namespace pnrdisc {

enum class AlphabetKind {
    Bpsk,     // {|-alpha>, |+alpha>}
    OokPeak,  // {|0>, |alpha>}        same peak power as BPSK
    OokAvg,   // {|0>, |sqrt(2)alpha>} same average power as BPSK
};

enum class Hypothesis { H0 = 0, H1 = 1 };

std::string to_string(AlphabetKind kind);
AlphabetKind alphabet_kind_from_string(const std::string& name);

// Two coherent states parameterized by a single nonnegative amplitude alpha.
// Mean photon number of |alpha> is alpha^2.
struct Alphabet {
    AlphabetKind kind = AlphabetKind::Bpsk;
    double alpha = 0.0;

    Alphabet() = default;
    Alphabet(AlphabetKind k, double a) : kind(k), alpha(a) {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("alphabet: alpha must be finite and >= 0");
    }

    static Alphabet bpsk(double alpha) { return {AlphabetKind::Bpsk, alpha}; }
    static Alphabet bpsk_mean(double alpha_sq) { return bpsk(std::sqrt(alpha_sq)); }
    static Alphabet ook_peak(double alpha) { return {AlphabetKind::OokPeak, alpha}; }
    static Alphabet ook_avg(double alpha) { return {AlphabetKind::OokAvg, alpha}; }
};

// Amplitude of the hypothesis state (always >= 0; the BPSK phase is handled
// by the interference sign in photostats).
double state_amplitude(const Alphabet& alphabet, Hypothesis h);

// Undisplaced, lossless mean photon number of the hypothesis state.
double state_mean_photons(const Alphabet& alphabet, Hypothesis h);

// Imperfection bundle shared by the analytic and Monte Carlo paths.
struct NoiseModel {
    double xi = 1.0;    // interference visibility of the displacement, in [0,1]
    double eta = 1.0;   // detection efficiency, in (0,1]
    double nu = 0.0;    // mean dark counts per pulse, >= 0
    double p_ap = 0.0;  // afterpulse probability per click, in [0,1)

    NoiseModel() = default;
    NoiseModel(double xi_, double eta_, double nu_, double p_ap_)
        : xi(xi_), eta(eta_), nu(nu_), p_ap(p_ap_) {
        validate();
    }
    void validate() const;
    bool operator==(const NoiseModel&) const = default;

    static NoiseModel ideal() { return {}; }
    // Parameters of the experimental demonstration.
    static NoiseModel experiment() { return {0.998, 0.72, 3.6e-3, 1.10e-2}; }
};

// PNR(m): outcomes {0, 1, ..., m-1, m+}; m is the maximum resolved photon
// number, so the outcome space has m+1 elements.
struct PnrResolution {
    int m = 1;

    PnrResolution() = default;
    PnrResolution(int m_) : m(m_) {  // NOLINT: implicit by design, m is the PNR index
        if (m < 1) throw std::invalid_argument("resolution: m must be >= 1");
    }
    int outcomes() const { return m + 1; }
};

// Only p_h1 is stored; p_h0 is always the exact complement.
struct Priors {
    double p_h1 = 0.5;

    Priors() = default;
    explicit Priors(double p1) : p_h1(p1) {
        if (!(p1 >= 0.0 && p1 <= 1.0))
            throw std::invalid_argument("priors: p_h1 must be in [0,1]");
    }
    double p_h0() const { return 1.0 - p_h1; }
    double of(Hypothesis h) const { return h == Hypothesis::H1 ? p_h1 : p_h0(); }
};

// The unit of evaluation: alphabet + displacement + resolution + noise + priors.
// beta is real and nonnegative; relative-phase errors are folded into xi.
struct ReceiverConfig {
    Alphabet alphabet;
    double beta = 0.0;
    PnrResolution resolution;
    NoiseModel noise;
    Priors priors;

    void validate() const;
};

// Probability mass over PNR outcomes {0,...,m-1,m+} for one hypothesis.
struct CountDistribution {
    int m = 1;
    std::vector<double> probs;  // size m+1, indexed by outcome

    double at(int k) const { return probs.at(static_cast<size_t>(k)); }
    double sum() const;
};

}  // namespace pnrdisc
