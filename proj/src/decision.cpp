#include "pnrdisc/decision.hpp"

#include <algorithm>
#include <cmath>

namespace pnrdisc {

Hypothesis map_decide(int k, const CountDistribution& dist_h0, const CountDistribution& dist_h1,
                      const Priors& priors) {
    if (dist_h0.m != dist_h1.m)
        throw std::invalid_argument("map_decide: distributions have mismatched resolutions");
    if (k < 0 || k > dist_h0.m) throw std::invalid_argument("map_decide: outcome k out of range");
    const double w0 = priors.p_h0() * dist_h0.at(k);
    const double w1 = priors.p_h1 * dist_h1.at(k);
    return w1 >= w0 ? Hypothesis::H1 : Hypothesis::H0;
}

double error_probability(const CountDistribution& dist_h0, const CountDistribution& dist_h1,
                         const Priors& priors) {
    if (dist_h0.m != dist_h1.m)
        throw std::invalid_argument("error_probability: distributions have mismatched resolutions");
    double err = 0.0;
    for (int k = 0; k <= dist_h0.m; ++k) {
        const double w0 = priors.p_h0() * dist_h0.at(k);
        const double w1 = priors.p_h1 * dist_h1.at(k);
        // Deciding H1 on ties means the tie contributes w0, exactly as if
        // map_decide had been applied outcome by outcome.
        err += (w1 >= w0) ? w0 : w1;
    }
    return err;
}

double error_probability(const ReceiverConfig& config, const CountOptions& options) {
    const CountDistribution d0 = count_distribution(config, Hypothesis::H0, options);
    const CountDistribution d1 = count_distribution(config, Hypothesis::H1, options);
    const double err = error_probability(d0, d1, config.priors);
    constexpr double slack = 1e-12;
    if (err < -slack || err > 0.5 + slack)
        throw std::logic_error("error_probability: value outside [0, 0.5], upstream normalization is broken");
    return std::clamp(err, 0.0, 0.5);
}

}  // namespace pnrdisc
