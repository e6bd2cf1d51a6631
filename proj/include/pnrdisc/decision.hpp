#pragma once

#include "pnrdisc/model.hpp"
#include "pnrdisc/photostats.hpp"

// MAP decision rule over PNR outcomes and the resulting discrimination
// error probability.

namespace pnrdisc {

// Hypothesis with the largest prior-weighted likelihood at outcome k.
// Exact ties go to H1 so Monte Carlo runs are reproducible bit for bit.
Hypothesis map_decide(int k, const CountDistribution& dist_h0, const CountDistribution& dist_h1,
                      const Priors& priors);

// Error probability of the MAP rule given the two conditional distributions:
// sum_k min(p_h0 P(k|H0), p_h1 P(k|H1)). The min form is algebraically
// 1 - sum_k max(...) but keeps full relative precision when the error is
// tiny, and it matches the outcome-by-outcome map_decide sum exactly.
double error_probability(const CountDistribution& dist_h0, const CountDistribution& dist_h1,
                         const Priors& priors);

// Full pipeline: both conditional distributions from photostats, then the
// MAP error. Throws std::logic_error if the result leaves [0, 1/2] by more
// than 1e-12 (that would mean broken normalization upstream); values inside
// the slack are clamped.
double error_probability(const ReceiverConfig& config, const CountOptions& options = {});

}  // namespace pnrdisc
