#include "pnrdisc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "pnrdisc/baselines.hpp"

namespace pnrdisc {

namespace {

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
    threads = std::max(threads, 1);
    if (threads == 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<size_t>(static_cast<size_t>(threads), n));
    pool.reserve(static_cast<size_t>(spawn));
    for (int t = 0; t < spawn; ++t) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

double nulling_beta(const Alphabet& alphabet) {
    // Displacement that nulls the H0 state: alpha for BPSK, 0 for OOK
    // (the OOK off-state is already vacuum).
    return alphabet.kind == AlphabetKind::Bpsk ? alphabet.alpha : 0.0;
}

struct PointEval {
    double beta = 0.0;
    double p_error = 0.0;
};

PointEval eval_point(const Alphabet& alphabet, int m, const NoiseModel& noise, bool optimize_beta,
                     const OptimizeOptions& opt) {
    if (optimize_beta) {
        const OptimizationResult r = optimize_displacement(alphabet, m, noise, opt);
        return {r.beta_opt, r.p_error_min};
    }
    ReceiverConfig config;
    config.alphabet = alphabet;
    config.beta = nulling_beta(alphabet);
    config.resolution = PnrResolution(m);
    config.noise = noise;
    config.priors = Priors(0.5);
    return {config.beta, error_probability(config, opt.count)};
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
    std::vector<double> grid(static_cast<size_t>(steps));
    if (steps == 1) {
        grid[0] = lo;
        return grid;
    }
    for (int i = 0; i < steps; ++i)
        grid[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return grid;
}

std::vector<ErrorCurveRow> error_curves(const std::vector<double>& alpha_sq_grid,
                                        const std::vector<int>& m_list, const NoiseModel& noise,
                                        bool optimize_beta, const SweepOptions& options) {
    if (alpha_sq_grid.empty() || m_list.empty())
        throw std::invalid_argument("error_curves: empty grid");
    const size_t na = alpha_sq_grid.size();
    std::vector<ErrorCurveRow> rows(na * m_list.size());
    parallel_for(rows.size(), options.threads, [&](size_t idx) {
        const int m = m_list[idx / na];
        const double alpha_sq = alpha_sq_grid[idx % na];
        const double alpha = std::sqrt(alpha_sq);
        const PointEval pe = eval_point(Alphabet::bpsk(alpha), m, noise, optimize_beta, options.opt);
        ErrorCurveRow& row = rows[idx];
        row.alpha_sq = alpha_sq;
        row.m = m;
        row.xi = noise.xi;
        row.eta = noise.eta;
        row.nu = noise.nu;
        row.p_ap = noise.p_ap;
        row.beta_opt = pe.beta;
        row.p_error = pe.p_error;
        row.p_hom = homodyne_limit(alpha, 1.0);
        row.p_hom_eta = homodyne_limit(alpha, noise.eta);
        row.p_hels = helstrom_bound(alpha);
    });
    return rows;
}

RatioMap ratio_map(const std::vector<double>& xi_grid, const std::vector<double>& alpha_sq_grid,
                   int m, double eta, const SweepOptions& options) {
    if (xi_grid.empty() || alpha_sq_grid.empty()) throw std::invalid_argument("ratio_map: empty grid");
    const size_t na = alpha_sq_grid.size();
    RatioMap map;
    map.cells.resize(xi_grid.size() * na);
    parallel_for(map.cells.size(), options.threads, [&](size_t idx) {
        const double xi = xi_grid[idx / na];
        const double alpha_sq = alpha_sq_grid[idx % na];
        const double alpha = std::sqrt(alpha_sq);
        NoiseModel noise;
        noise.xi = xi;
        noise.eta = eta;
        const OptimizationResult r = optimize_displacement(alpha, m, noise, options.opt);
        RatioMapCell& cell = map.cells[idx];
        cell.xi = xi;
        cell.alpha_sq = alpha_sq;
        cell.beta_opt = r.beta_opt;
        cell.p_error = r.p_error_min;
        cell.p_hom = homodyne_limit(alpha, 1.0);
        cell.log10_ratio = std::log10(cell.p_error / cell.p_hom);
    });

    // P_E = P_hom contour: last sub-QNL point of each xi row, interpolated
    // against the neighbor where the ratio crosses 1.
    for (size_t ix = 0; ix < xi_grid.size(); ++ix) {
        const RatioMapCell* row = &map.cells[ix * na];
        int last_below = -1;
        for (size_t ia = 0; ia < na; ++ia) {
            if (row[ia].log10_ratio <= 0.0) last_below = static_cast<int>(ia);
        }
        if (last_below < 0) continue;
        double crossing = row[static_cast<size_t>(last_below)].alpha_sq;
        if (last_below + 1 < static_cast<int>(na)) {
            const RatioMapCell& a = row[static_cast<size_t>(last_below)];
            const RatioMapCell& b = row[static_cast<size_t>(last_below) + 1];
            const double t = -a.log10_ratio / (b.log10_ratio - a.log10_ratio);
            crossing = a.alpha_sq + t * (b.alpha_sq - a.alpha_sq);
        }
        map.boundary.emplace_back(xi_grid[ix], crossing);
    }
    return map;
}

std::vector<ImprovementRow> improvement_curve(const std::vector<double>& alpha_sq_grid,
                                              const std::vector<int>& m_list, double xi,
                                              const std::vector<double>& eta_list,
                                              const SweepOptions& options) {
    if (alpha_sq_grid.empty() || m_list.empty() || eta_list.empty())
        throw std::invalid_argument("improvement_curve: empty grid");
    const size_t na = alpha_sq_grid.size();
    const size_t nm = m_list.size();
    std::vector<ImprovementRow> rows(na * nm * eta_list.size());
    parallel_for(rows.size(), options.threads, [&](size_t idx) {
        const double eta = eta_list[idx / (na * nm)];
        const int m = m_list[(idx / na) % nm];
        const double alpha_sq = alpha_sq_grid[idx % na];
        const double alpha = std::sqrt(alpha_sq);
        NoiseModel noise;
        noise.xi = xi;
        noise.eta = eta;
        const OptimizationResult r = optimize_displacement(alpha, m, noise, options.opt);
        ImprovementRow& row = rows[idx];
        row.alpha_sq = alpha_sq;
        row.m = m;
        row.eta = eta;
        row.p_error = r.p_error_min;
        row.p_hom = homodyne_limit(alpha, 1.0);
        row.improvement = row.p_hom / row.p_error;
    });
    return rows;
}

DarkFloorResult dark_floor_study(const std::vector<AlphabetKind>& alphabets,
                                 const std::vector<int>& m_list, double nu,
                                 const std::vector<double>& alpha_sq_grid, bool displaced_ook,
                                 const SweepOptions& options) {
    if (!(nu > 0.0)) throw std::invalid_argument("dark_floor_study: nu must be > 0");
    if (alphabets.empty() || m_list.empty() || alpha_sq_grid.empty())
        throw std::invalid_argument("dark_floor_study: empty grid");

    NoiseModel noise;
    noise.nu = nu;  // dark counts in isolation

    const size_t na = alpha_sq_grid.size();
    const size_t nm = m_list.size();
    DarkFloorResult result;
    result.rows.resize(alphabets.size() * nm * na);
    parallel_for(result.rows.size(), options.threads, [&](size_t idx) {
        const AlphabetKind kind = alphabets[idx / (nm * na)];
        const int m = m_list[(idx / na) % nm];
        const double alpha_sq = alpha_sq_grid[idx % na];
        const Alphabet alphabet(kind, std::sqrt(alpha_sq));
        const bool optimize_beta = kind == AlphabetKind::Bpsk || displaced_ook;
        const PointEval pe = eval_point(alphabet, m, noise, optimize_beta, options.opt);
        result.rows[idx] = {kind, m, alpha_sq, pe.beta, pe.p_error};
    });

    // Asymptotic floor: minimum over the high-power tail (top quarter).
    const size_t tail_begin = na - std::max<size_t>(na / 4, 1);
    for (size_t ka = 0; ka < alphabets.size(); ++ka) {
        for (size_t km = 0; km < nm; ++km) {
            double floor = 1.0;
            for (size_t ia = tail_begin; ia < na; ++ia) {
                floor = std::min(floor, result.rows[(ka * nm + km) * na + ia].p_error);
            }
            result.floors.push_back({alphabets[ka], m_list[km], floor});
        }
    }
    return result;
}

namespace {

struct Preset {
    const char* name;
    bool homodyne;
    int m;
    NoiseModel noise;
    AlphabetKind kind;
};

// Supplemental comparison scenarios. Homodyne entries only use noise.eta;
// PNR entries are optimized-displacement receivers.
std::vector<Preset> presets() {
    const double sys = 0.88;  // system efficiency when losses are included
    return {
        {"homodyne_995", true, 1, {1.0, 0.995, 0.0, 0.0}, AlphabetKind::Bpsk},
        {"homodyne_995_sys88", true, 1, {1.0, 0.995 * sys, 0.0, 0.0}, AlphabetKind::Bpsk},
        {"homodyne_82", true, 1, {1.0, 0.82, 0.0, 0.0}, AlphabetKind::Bpsk},
        {"pnr4_98", false, 4, {0.998, 0.98, 0.0, 0.0}, AlphabetKind::Bpsk},
        {"pnr4_98_sys88", false, 4, {0.998, 0.98 * sys, 0.0, 0.0}, AlphabetKind::Bpsk},
        {"pnr4_experiment", false, 4, NoiseModel::experiment(), AlphabetKind::Bpsk},
        {"ook_ideal", false, 1, {1.0, 1.0, 0.0, 0.0}, AlphabetKind::OokPeak},
    };
}

}  // namespace

std::vector<std::string> comparison_presets() {
    std::vector<std::string> names;
    for (const Preset& p : presets()) names.emplace_back(p.name);
    return names;
}

std::vector<ComparisonRow> comparison_study(const std::vector<double>& alpha_sq_grid,
                                            const SweepOptions& options) {
    if (alpha_sq_grid.empty()) throw std::invalid_argument("comparison_study: empty grid");
    const std::vector<Preset> all = presets();
    const size_t na = alpha_sq_grid.size();
    std::vector<ComparisonRow> rows(all.size() * na);
    parallel_for(rows.size(), options.threads, [&](size_t idx) {
        const Preset& preset = all[idx / na];
        const double alpha_sq = alpha_sq_grid[idx % na];
        const double alpha = std::sqrt(alpha_sq);
        double p_error = 0.0;
        if (preset.homodyne) {
            p_error = homodyne_limit(alpha, preset.noise.eta);
        } else {
            const Alphabet alphabet(preset.kind, alpha);
            const bool optimize_beta = preset.kind == AlphabetKind::Bpsk;
            p_error = eval_point(alphabet, preset.m, preset.noise, optimize_beta, options.opt).p_error;
        }
        rows[idx] = {preset.name, alpha_sq, p_error};
    });
    return rows;
}

}  // namespace pnrdisc
