#pragma once

// Independent test oracles. Everything here is deliberately naive and slow;
// none of it shares code with the implementation paths it checks.

#include <cmath>
#include <vector>

#include "pnrdisc/model.hpp"

namespace oracles {

// Poisson pmf straight from the log-domain definition.
inline double poisson_pmf(double mean, int k) {
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(static_cast<double>(k) * std::log(mean) - mean -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

// Upper tail P(X >= k0) summed term by term in long double.
inline double poisson_upper_tail(double mean, int k0, int terms = 400) {
    long double sum = 0.0L;
    for (int k = k0; k < k0 + terms; ++k) sum += static_cast<long double>(poisson_pmf(mean, k));
    return static_cast<double>(sum);
}

// Afterpulse cascade by explicit convolution: the chain started by one click
// has length l with probability p^(l-1) (1-p); the total for n primaries is
// the n-fold convolution of that chain-length law.
inline std::vector<double> cascade_by_convolution(const std::vector<double>& pmf, double p_ap,
                                                  int out_len) {
    const int chain_cap = 400;
    std::vector<double> chain(static_cast<size_t>(chain_cap) + 1, 0.0);
    for (int l = 1; l <= chain_cap; ++l)
        chain[static_cast<size_t>(l)] = std::pow(p_ap, l - 1) * (1.0 - p_ap);

    std::vector<double> out(static_cast<size_t>(out_len), 0.0);
    if (!pmf.empty()) out[0] += pmf[0];

    std::vector<double> conv{1.0};  // 0-fold convolution: unit mass at 0
    for (size_t n = 1; n < pmf.size(); ++n) {
        std::vector<double> next(std::min<size_t>(conv.size() + chain.size() - 1,
                                                  static_cast<size_t>(out_len)),
                                 0.0);
        for (size_t a = 0; a < conv.size(); ++a) {
            if (conv[a] == 0.0) continue;
            for (size_t b = 0; b < chain.size() && a + b < next.size(); ++b)
                next[a + b] += conv[a] * chain[b];
        }
        conv = std::move(next);
        if (pmf[n] == 0.0) continue;
        for (size_t t = 0; t < conv.size(); ++t) out[t] += pmf[n] * conv[t];
    }
    return out;
}

// Error probability by direct enumeration, 1 - sum_k max(...): the form the
// derivation states, kept separate from the library's summation.
inline double brute_force_error(const pnrdisc::CountDistribution& d0,
                                const pnrdisc::CountDistribution& d1, const pnrdisc::Priors& priors) {
    double correct = 0.0;
    for (int k = 0; k <= d0.m; ++k)
        correct += std::max(priors.p_h0() * d0.at(k), priors.p_h1 * d1.at(k));
    return 1.0 - correct;
}

// Chi-square critical values at significance 1e-3: exact table for small df,
// Wilson-Hilferty beyond it.
inline double chi2_crit_1e3(int df) {
    static const double table[] = {0.0,    10.828, 13.816, 16.266, 18.467, 20.515,
                                   22.458, 24.322, 26.125, 27.877, 29.588};
    if (df >= 1 && df <= 10) return table[df];
    const double z = 3.090232306167814;  // N(0,1) quantile at 0.999
    const double d = static_cast<double>(df);
    const double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * t * t * t;
}

}  // namespace oracles
