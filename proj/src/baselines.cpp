#include "pnrdisc/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace pnrdisc {

double homodyne_limit(double alpha, double eta) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("homodyne_limit: alpha must be >= 0");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("homodyne_limit: eta must be in (0,1]");
    return 0.5 * std::erfc(std::sqrt(2.0 * eta) * alpha);
}

double helstrom_bound(double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("helstrom_bound: alpha must be >= 0");
    const double x = std::exp(-4.0 * alpha * alpha);
    // (1 - sqrt(1-x))/2 rewritten as x / (2 (1 + sqrt(1-x))): no cancellation
    // for x -> 0, exact 1/2 at x = 1.
    return 0.5 * x / (1.0 + std::sqrt(1.0 - x));
}

}  // namespace pnrdisc
