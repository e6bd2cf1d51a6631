#pragma once

// Closed-form reference limits for binary coherent-state discrimination.

namespace pnrdisc {

// Homodyne (quantum noise) limit P_hom = (1 - erf(sqrt(2) alpha)) / 2,
// with detection efficiency folded in as amplitude loss alpha -> sqrt(eta) alpha.
// Evaluated through erfc so large alpha keeps full relative precision.
double homodyne_limit(double alpha, double eta = 1.0);

// Helstrom bound P_hels = (1 - sqrt(1 - exp(-4 alpha^2))) / 2, evaluated in
// a cancellation-free form that tends to exp(-4 alpha^2)/4 for large alpha.
double helstrom_bound(double alpha);

}  // namespace pnrdisc
