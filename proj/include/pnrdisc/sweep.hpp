#pragma once

#include <string>
#include <vector>

#include "pnrdisc/model.hpp"
#include "pnrdisc/optimize.hpp"

// Parameter-sweep drivers behind every figure analog: error curves, QNL
// ratio maps, improvement curves, dark-count floors, detector comparisons.
// Cells are independent; evaluation is parallel and order-invariant (rows
// are written by index, so any thread count yields identical tables).

namespace pnrdisc {

struct SweepOptions {
    int threads = 1;
    OptimizeOptions opt;
};

struct ErrorCurveRow {
    double alpha_sq = 0.0;
    int m = 1;
    double xi = 1.0, eta = 1.0, nu = 0.0, p_ap = 0.0;
    double beta_opt = 0.0;
    double p_error = 0.0;
    double p_hom = 0.0;      // ideal QNL
    double p_hom_eta = 0.0;  // QNL adjusted for the detection efficiency
    double p_hels = 0.0;
};

// Per (alpha^2, m): optimized (or nulling beta = alpha) BPSK error plus the
// closed-form baselines.
std::vector<ErrorCurveRow> error_curves(const std::vector<double>& alpha_sq_grid,
                                        const std::vector<int>& m_list, const NoiseModel& noise,
                                        bool optimize_beta = true, const SweepOptions& options = {});

struct RatioMapCell {
    double xi = 1.0;
    double alpha_sq = 0.0;
    double beta_opt = 0.0;
    double p_error = 0.0;
    double p_hom = 0.0;  // ideal QNL reference
    double log10_ratio = 0.0;
};

struct RatioMap {
    std::vector<RatioMapCell> cells;  // xi-major, alpha_sq-minor
    // P_E = P_hom contour: per xi row, the largest alpha^2 of the sub-QNL
    // region, linearly interpolated. Rows whose region is empty are skipped.
    std::vector<std::pair<double, double>> boundary;  // (xi, alpha_sq)
};

RatioMap ratio_map(const std::vector<double>& xi_grid, const std::vector<double>& alpha_sq_grid,
                   int m, double eta, const SweepOptions& options = {});

struct ImprovementRow {
    double alpha_sq = 0.0;
    int m = 1;
    double eta = 1.0;
    double p_error = 0.0;
    double p_hom = 0.0;       // ideal QNL reference
    double improvement = 0.0;  // p_hom / p_error
};

std::vector<ImprovementRow> improvement_curve(const std::vector<double>& alpha_sq_grid,
                                              const std::vector<int>& m_list, double xi,
                                              const std::vector<double>& eta_list,
                                              const SweepOptions& options = {});

struct DarkFloorRow {
    AlphabetKind kind = AlphabetKind::Bpsk;
    int m = 1;
    double alpha_sq = 0.0;
    double beta = 0.0;
    double p_error = 0.0;
};

struct DarkFloorResult {
    struct Floor {
        AlphabetKind kind = AlphabetKind::Bpsk;
        int m = 1;
        double p_floor = 0.0;
    };
    std::vector<DarkFloorRow> rows;
    std::vector<Floor> floors;  // minimum over the top quarter of the grid
};

// Dark counts in isolation: xi = 1, eta = 1, p_ap = 0, only nu acting. BPSK
// uses the optimized displacement; OOK alphabets use direct detection
// (beta = 0) unless displaced_ook is set.
DarkFloorResult dark_floor_study(const std::vector<AlphabetKind>& alphabets,
                                 const std::vector<int>& m_list, double nu,
                                 const std::vector<double>& alpha_sq_grid,
                                 bool displaced_ook = false, const SweepOptions& options = {});

struct ComparisonRow {
    std::string preset;
    double alpha_sq = 0.0;
    double p_error = 0.0;
};

// Named preset scenarios: state-of-the-art homodyne and PNR detectors with
// and without system losses, the experimental receiver, ideal OOK.
std::vector<ComparisonRow> comparison_study(const std::vector<double>& alpha_sq_grid,
                                            const SweepOptions& options = {});
std::vector<std::string> comparison_presets();

// Uniform inclusive grid helper used by the sweeps and the CLI.
std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace pnrdisc
