#include "pnrdisc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pnrdisc {

namespace {

double eval_error(const Alphabet& alphabet, int m, const NoiseModel& noise, double beta,
                  const CountOptions& count) {
    ReceiverConfig config;
    config.alphabet = alphabet;
    config.beta = beta;
    config.resolution = PnrResolution(m);
    config.noise = noise;
    config.priors = Priors(0.5);
    return error_probability(config, count);
}

// Golden-section minimization; robust to the kinks the MAP flips leave in
// the landscape. Returns (beta, p_error) at the midpoint of the final bracket.
LandscapePoint golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    return {mid, f(mid)};
}

}  // namespace

std::vector<LandscapePoint> landscape(const Alphabet& alphabet, int m, const NoiseModel& noise,
                                      const std::vector<double>& beta_grid, const CountOptions& count) {
    std::vector<LandscapePoint> points;
    points.reserve(beta_grid.size());
    for (double beta : beta_grid) points.push_back({beta, eval_error(alphabet, m, noise, beta, count)});
    return points;
}

std::vector<LandscapePoint> landscape(double alpha, int m, const NoiseModel& noise,
                                      const std::vector<double>& beta_grid, const CountOptions& count) {
    return landscape(Alphabet::bpsk(alpha), m, noise, beta_grid, count);
}

OptimizationResult optimize_displacement(const Alphabet& alphabet, int m, const NoiseModel& noise,
                                         const OptimizeOptions& options) {
    const auto f = [&](double beta) { return eval_error(alphabet, m, noise, beta, options.count); };

    const double peak_mean = std::max(state_mean_photons(alphabet, Hypothesis::H0),
                                      state_mean_photons(alphabet, Hypothesis::H1));
    const int n = std::max(options.grid_per_outcome * (m + 1), 8);

    // Coarse grid uniform in beta^2 up to the brightest state mean plus a
    // margin that grows with m. If the landscape still descends into the
    // right edge (large m at low power pushes the global minimum out), the
    // bracket doubles before anything is declared a failure.
    OptimizationResult result;
    std::vector<double> grid(static_cast<size_t>(n));
    std::vector<double> val(static_cast<size_t>(n));
    std::vector<LandscapePoint> candidates;
    double margin = options.bracket_margin;
    for (int attempt = 0;; ++attempt) {
        const double hi_sq = peak_mean + margin * static_cast<double>(m + 1);
        for (int i = 0; i < n; ++i) {
            grid[static_cast<size_t>(i)] =
                std::sqrt(hi_sq * static_cast<double>(i) / static_cast<double>(n - 1));
            val[static_cast<size_t>(i)] = f(grid[static_cast<size_t>(i)]);
        }
        result.bracket_lo = grid.front();
        result.bracket_hi = grid.back();

        const auto [min_it, max_it] = std::minmax_element(val.begin(), val.end());
        if (*max_it - *min_it < 1e-14) {
            // Flat landscape (alpha = 0): every beta is equivalent. Report
            // the smallest interior grid point so the output stays
            // deterministic.
            result.degenerate = true;
            result.beta_opt = grid[1];
            result.p_error_min = val[1];
            result.candidates = {{grid[1], val[1]}};
            return result;
        }

        const bool edge_descent = val[static_cast<size_t>(n) - 1] < val[static_cast<size_t>(n) - 2];
        if (edge_descent) {
            if (attempt >= 4)
                throw std::runtime_error(
                    "optimize_displacement: minimum still at bracket edge after enlarging, "
                    "enlarge bracket_margin");
            margin *= 2.0;
            continue;
        }

        // Refine from every grid valley (interior, plus the left endpoint
        // when it starts a descent). beta = 0 can be a genuine minimum for
        // OOK alphabets.
        candidates.clear();
        for (int i = 0; i + 1 < n; ++i) {
            const size_t ui = static_cast<size_t>(i);
            const bool left_ok = i == 0 || val[ui] <= val[ui - 1];
            const bool right_ok = val[ui] <= val[ui + 1];
            if (!left_ok || !right_ok) continue;
            if (i == 0) {
                candidates.push_back({grid[0], val[0]});
                continue;
            }
            candidates.push_back(golden_min(f, grid[ui - 1], grid[ui + 1], options.beta_tol));
        }
        break;
    }
    if (candidates.empty())
        throw std::runtime_error("optimize_displacement: no bracketed minimum found");

    std::sort(candidates.begin(), candidates.end(),
              [](const LandscapePoint& a, const LandscapePoint& b) { return a.beta < b.beta; });
    // Adjacent valleys that refined into the same minimum collapse to one.
    std::vector<LandscapePoint> merged;
    for (const auto& c : candidates) {
        if (!merged.empty() && std::abs(c.beta - merged.back().beta) < 1e-5) {
            if (c.p_error < merged.back().p_error) merged.back() = c;
        } else {
            merged.push_back(c);
        }
    }

    const auto best = std::min_element(merged.begin(), merged.end(),
                                       [](const LandscapePoint& a, const LandscapePoint& b) {
                                           if (a.p_error != b.p_error) return a.p_error < b.p_error;
                                           return a.beta < b.beta;
                                       });
    result.beta_opt = best->beta;
    result.p_error_min = best->p_error;
    result.candidates = std::move(merged);
    return result;
}

OptimizationResult optimize_displacement(double alpha, int m, const NoiseModel& noise,
                                         const OptimizeOptions& options) {
    return optimize_displacement(Alphabet::bpsk(alpha), m, noise, options);
}

std::vector<BetaCurvePoint> beta_curve(const std::vector<double>& alpha_sq_grid, int m,
                                       const NoiseModel& noise, const OptimizeOptions& options) {
    std::vector<BetaCurvePoint> curve;
    curve.reserve(alpha_sq_grid.size());
    for (double alpha_sq : alpha_sq_grid) {
        const double alpha = std::sqrt(alpha_sq);
        const OptimizationResult r = optimize_displacement(alpha, m, noise, options);
        curve.push_back({alpha_sq, r.beta_opt, alpha > 0.0 ? r.beta_opt / alpha : 0.0, r.p_error_min});
    }
    return curve;
}

int count_jumps(const std::vector<BetaCurvePoint>& curve, double threshold) {
    int jumps = 0;
    for (size_t i = 1; i < curve.size(); ++i) {
        if (std::abs(curve[i].beta_ratio - curve[i - 1].beta_ratio) > threshold) ++jumps;
    }
    return jumps;
}

}  // namespace pnrdisc
