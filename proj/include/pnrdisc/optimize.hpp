#pragma once

#include <vector>

#include "pnrdisc/decision.hpp"
#include "pnrdisc/model.hpp"

// Global optimization of the displacement amplitude beta. The error
// landscape has up to ~m local minima separated by kinks where the MAP
// decision flips, so the search is multi-start: coarse grid in beta^2,
// derivative-free refinement from every grid valley, global pick at the end.

namespace pnrdisc {

struct LandscapePoint {
    double beta = 0.0;
    double p_error = 0.0;
};

struct OptimizationResult {
    double beta_opt = 0.0;
    double p_error_min = 0.0;
    bool degenerate = false;               // flat landscape (alpha = 0)
    std::vector<LandscapePoint> candidates;  // refined local minima, ascending beta
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

struct OptimizeOptions {
    double bracket_margin = 2.5;   // beta^2 upper bound = max state mean + margin*(m+1)
    int grid_per_outcome = 50;     // coarse grid points per (m+1)
    double beta_tol = 1e-7;        // refinement stop: bracket width in beta
    CountOptions count;
};

// Error probability at each grid point, equal priors. Suitable for CSV dump.
std::vector<LandscapePoint> landscape(const Alphabet& alphabet, int m, const NoiseModel& noise,
                                      const std::vector<double>& beta_grid,
                                      const CountOptions& count = {});
std::vector<LandscapePoint> landscape(double alpha, int m, const NoiseModel& noise,
                                      const std::vector<double>& beta_grid,
                                      const CountOptions& count = {});

OptimizationResult optimize_displacement(const Alphabet& alphabet, int m, const NoiseModel& noise,
                                         const OptimizeOptions& options = {});
OptimizationResult optimize_displacement(double alpha, int m, const NoiseModel& noise,
                                         const OptimizeOptions& options = {});

struct BetaCurvePoint {
    double alpha_sq = 0.0;
    double beta_opt = 0.0;
    double beta_ratio = 0.0;  // beta_opt / alpha
    double p_error = 0.0;
};

// Per-point global optimization across an ascending alpha^2 grid. No warm
// starts: each point is optimized from scratch so the discontinuous jumps in
// beta_opt are not smoothed over by tracking a stale local minimum.
std::vector<BetaCurvePoint> beta_curve(const std::vector<double>& alpha_sq_grid, int m,
                                       const NoiseModel& noise, const OptimizeOptions& options = {});

// Number of adjacent-point ratio changes exceeding `threshold`.
int count_jumps(const std::vector<BetaCurvePoint>& curve, double threshold = 0.05);

}  // namespace pnrdisc
