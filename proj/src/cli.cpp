#include "pnrdisc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnrdisc/baselines.hpp"
#include "pnrdisc/config_io.hpp"
#include "pnrdisc/decision.hpp"
#include "pnrdisc/optimize.hpp"
#include "pnrdisc/simulate.hpp"
#include "pnrdisc/sweep.hpp"

namespace pnrdisc {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(uint64_t v) { return std::to_string(v); }

// One output table: metadata comments, a header row, string cells.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }

    void write_csv(std::ostream& os) const {
        for (const auto& [key, value] : meta) os << "# " << key << " = " << value << "\n";
        for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    }

    void write_json(std::ostream& os, const std::string& command) const {
        json doc;
        doc["command"] = command;
        for (const auto& [key, value] : meta) {
            json parsed = json::parse(value, nullptr, false);
            doc["meta"][key] = parsed.is_discarded() ? json(value) : parsed;
        }
        doc["columns"] = columns;
        doc["rows"] = json::array();
        for (const auto& row : rows) doc["rows"].push_back(row);
        os << doc.dump(2) << "\n";
    }
};

struct OutputTarget {
    std::string path;    // empty: stdout
    std::string format;  // "csv" | "json"

    void emit(const Table& table, const std::string& command, std::ostream& fallback) const {
        std::ofstream file;
        std::ostream* os = &fallback;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::invalid_argument("out: cannot open '" + path + "' for writing");
            os = &file;
        }
        if (format == "json")
            table.write_json(*os, command);
        else
            table.write_csv(*os);
    }

    // Derived path for a secondary table ("map.csv" -> "map.boundary.csv").
    std::string sibling(const std::string& tag) const {
        if (path.empty()) return {};
        const size_t dot = path.find_last_of('.');
        if (dot == std::string::npos) return path + "." + tag;
        return path.substr(0, dot) + "." + tag + path.substr(dot);
    }
};

// Flags shared by every subcommand; values override the --config file.
struct CommonCli {
    std::string config_path;
    Settings settings;
    OutputTarget target;
    bool dump_config = false;

    CLI::App* attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
        cmd->add_option("--alphabet", alphabet_name, "bpsk | ook_peak | ook_avg");
        cmd->add_option("--alpha-sq", settings.alpha_sq, "mean photon number |alpha|^2");
        cmd->add_option("--m", settings.m, "PNR resolution (max resolved photons)");
        cmd->add_option("--xi", settings.noise.xi, "displacement interference visibility");
        cmd->add_option("--eta", settings.noise.eta, "detection efficiency");
        cmd->add_option("--nu", settings.noise.nu, "mean dark counts per pulse");
        cmd->add_option("--pap", settings.noise.p_ap, "afterpulse probability");
        cmd->add_option("--p-h1", settings.p_h1, "prior probability of H1");
        cmd->add_option("--beta-mode", settings.beta_mode, "opt | null | fixed:<value>");
        cmd->add_option("--beta", settings.beta, "displacement amplitude for --beta-mode fixed");
        cmd->add_option("--ap-model", ap_model_name, "cascade | order2");
        cmd->add_option("--trials", settings.trials, "Monte Carlo trials per run");
        cmd->add_option("--runs", settings.runs, "independent runs");
        cmd->add_option("--seed", settings.seed, "base RNG seed");
        cmd->add_option("--threads", settings.threads, "worker threads (0: auto)");
        cmd->add_option("--out", target.path, "output file (default: stdout)");
        cmd->add_option("--format", target.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");
        return cmd;
    }

    // Merge order: defaults < config file < explicit flags.
    Settings resolve(CLI::App* cmd) {
        Settings resolved;
        if (!config_path.empty()) resolved = load_settings_file(config_path);

        json overrides = settings_to_json(settings);
        json base = settings_to_json(resolved);
        static const std::pair<const char*, const char*> scalar_flags[] = {
            {"--alpha-sq", "alpha_sq"}, {"--m", "m"},         {"--p-h1", "p_h1"},
            {"--beta-mode", "beta_mode"}, {"--beta", "beta"}, {"--trials", "trials"},
            {"--runs", "runs"},         {"--seed", "seed"},   {"--threads", "threads"},
        };
        for (const auto& [flag, key] : scalar_flags) {
            if (cmd->count(flag) > 0) base[key] = overrides.at(key);
        }
        static const std::pair<const char*, const char*> noise_flags[] = {
            {"--xi", "xi"}, {"--eta", "eta"}, {"--nu", "nu"}, {"--pap", "p_ap"}};
        for (const auto& [flag, key] : noise_flags) {
            if (cmd->count(flag) > 0) base["noise"][key] = overrides["noise"].at(key);
        }
        if (cmd->count("--alphabet") > 0) base["alphabet"] = alphabet_name;
        if (cmd->count("--ap-model") > 0) base["ap_model"] = ap_model_name;
        return settings_from_json(base);
    }

  private:
    std::string alphabet_name = "bpsk";
    std::string ap_model_name = "cascade";
};

struct GridCli {
    double alpha_sq_min = 0.1;
    double alpha_sq_max = 10.0;
    int alpha_sq_steps = 100;
    std::vector<int> m_list{1, 2, 3, 4};

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha-sq-min", alpha_sq_min, "sweep lower bound in |alpha|^2");
        cmd->add_option("--alpha-sq-max", alpha_sq_max, "sweep upper bound in |alpha|^2");
        cmd->add_option("--alpha-sq-steps", alpha_sq_steps, "sweep grid points");
        cmd->add_option("--m-list", m_list, "PNR resolutions")->delimiter(',');
    }

    std::vector<double> grid() const { return linspace(alpha_sq_min, alpha_sq_max, alpha_sq_steps); }
};

void add_config_meta(Table& table, const std::string& command, const Settings& settings) {
    table.add_meta("command", command);
    table.add_meta("config", settings_to_json(settings).dump());
}

SweepOptions sweep_options(const Settings& settings) {
    SweepOptions options;
    options.threads = resolve_threads(settings);
    options.opt.count.ap_model = settings.ap_model;
    return options;
}

int emit_or_dump(const CommonCli& common, const Settings& settings, const Table& table,
                 const std::string& command, std::ostream& out) {
    if (common.dump_config) {
        out << settings_to_json(settings).dump(2) << "\n";
        return 0;
    }
    common.target.emit(table, command, out);
    return 0;
}

// --- subcommand bodies -----------------------------------------------------

int cmd_baselines(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli, bool grid_requested,
                  std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    Table table;
    add_config_meta(table, "baselines", settings);
    table.columns = {"alpha_sq", "p_hom", "p_hom_eta", "p_hels"};
    const std::vector<double> grid =
        grid_requested ? grid_cli.grid() : std::vector<double>{settings.alpha_sq};
    for (double alpha_sq : grid) {
        const double alpha = std::sqrt(alpha_sq);
        table.rows.push_back({fmt(alpha_sq), fmt(homodyne_limit(alpha, 1.0)),
                              fmt(homodyne_limit(alpha, settings.noise.eta)), fmt(helstrom_bound(alpha))});
    }
    return emit_or_dump(common, settings, table, "baselines", out);
}

int cmd_error_curve(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli, bool with_mc,
                    std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    const bool optimize_beta = settings.beta_mode != "null";
    const auto rows =
        error_curves(grid_cli.grid(), grid_cli.m_list, settings.noise, optimize_beta, sweep_options(settings));
    Table table;
    add_config_meta(table, "error-curve", settings);
    table.add_meta("beta_mode", optimize_beta ? "opt" : "null");
    table.columns = {"alpha_sq", "m",        "xi",      "eta",   "nu",       "p_ap",
                     "beta_opt", "p_error",  "p_hom",   "p_hom_eta", "p_hels"};
    for (const auto& r : rows) {
        table.rows.push_back({fmt(r.alpha_sq), fmt(r.m), fmt(r.xi), fmt(r.eta), fmt(r.nu), fmt(r.p_ap),
                              fmt(r.beta_opt), fmt(r.p_error), fmt(r.p_hom), fmt(r.p_hom_eta), fmt(r.p_hels)});
    }

    if (with_mc) {
        // Monte Carlo overlay: row i, run r uses seed = base + i*runs + r.
        table.columns.insert(table.columns.end(), {"p_hat", "mc_sigma", "mc_seed", "mc_trials"});
        SimOptions sim;
        sim.decision_count.ap_model = settings.ap_model;
        sim.threads = resolve_threads(settings);
        RunPlan plan;
        plan.runs = settings.runs;
        plan.bands.push_back({1e300, settings.trials});
        for (size_t i = 0; i < rows.size(); ++i) {
            ReceiverConfig config;
            config.alphabet = Alphabet::bpsk_mean(rows[i].alpha_sq);
            config.beta = rows[i].beta_opt;
            config.resolution = PnrResolution(rows[i].m);
            config.noise = settings.noise;
            config.priors = Priors(settings.p_h1);
            const uint64_t seed =
                settings.seed + static_cast<uint64_t>(i) * static_cast<uint64_t>(plan.runs);
            const auto point = run_experiment(plan, {config}, seed, 1, sim).front();
            const double spread = plan.runs > 1 ? point.stddev_runs : point.runs.front().sigma;
            table.rows[i].insert(table.rows[i].end(),
                                 {fmt(point.pooled_mean), fmt(spread), fmt(seed), fmt(settings.trials)});
        }
    }
    return emit_or_dump(common, settings, table, "error-curve", out);
}

int cmd_optimize(CommonCli& common, CLI::App* cmd, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    OptimizeOptions opt;
    opt.count.ap_model = settings.ap_model;
    const Alphabet alphabet(settings.alphabet, std::sqrt(settings.alpha_sq));
    const OptimizationResult r = optimize_displacement(alphabet, settings.m, settings.noise, opt);
    Table table;
    add_config_meta(table, "optimize", settings);
    table.add_meta("beta_opt", fmt(r.beta_opt));
    table.add_meta("beta_opt_sq", fmt(r.beta_opt * r.beta_opt));
    table.add_meta("p_error", fmt(r.p_error_min));
    table.add_meta("degenerate", r.degenerate ? "1" : "0");
    table.add_meta("bracket", fmt(r.bracket_lo) + ".." + fmt(r.bracket_hi));
    table.columns = {"beta", "beta_sq", "p_error", "is_global"};
    for (const auto& c : r.candidates) {
        table.rows.push_back(
            {fmt(c.beta), fmt(c.beta * c.beta), fmt(c.p_error), c.beta == r.beta_opt ? "1" : "0"});
    }
    return emit_or_dump(common, settings, table, "optimize", out);
}

int cmd_landscape(CommonCli& common, CLI::App* cmd, double beta_sq_max, int steps, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    if (beta_sq_max <= 0.0)
        beta_sq_max = settings.alpha_sq + 2.5 * static_cast<double>(settings.m + 1);
    std::vector<double> beta_grid(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        beta_grid[static_cast<size_t>(i)] =
            std::sqrt(beta_sq_max * static_cast<double>(i) / static_cast<double>(steps - 1));
    CountOptions count;
    count.ap_model = settings.ap_model;
    const Alphabet alphabet(settings.alphabet, std::sqrt(settings.alpha_sq));
    const auto points = landscape(alphabet, settings.m, settings.noise, beta_grid, count);
    Table table;
    add_config_meta(table, "landscape", settings);
    table.columns = {"beta", "beta_sq", "p_error"};
    for (const auto& p : points)
        table.rows.push_back({fmt(p.beta), fmt(p.beta * p.beta), fmt(p.p_error)});
    return emit_or_dump(common, settings, table, "landscape", out);
}

int cmd_simulate(CommonCli& common, CLI::App* cmd, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    const ReceiverConfig config = make_receiver(settings);
    SimOptions sim;
    sim.decision_count.ap_model = settings.ap_model;
    sim.threads = resolve_threads(settings);

    Table table;
    add_config_meta(table, "simulate", settings);
    table.add_meta("beta", fmt(config.beta));
    table.add_meta("p_analytic", fmt(error_probability(config, sim.decision_count)));
    table.columns = {"run", "seed", "trials", "errors", "p_hat", "sigma"};

    if (settings.runs == 1) {
        const ErrorEstimate e = run_trials(config, settings.trials, settings.seed, sim);
        table.rows.push_back({fmt(0), fmt(e.seed), fmt(e.trials), fmt(e.errors), fmt(e.p_hat), fmt(e.sigma)});
    } else {
        RunPlan plan;
        plan.runs = settings.runs;
        plan.bands.push_back({1e300, settings.trials});
        const auto points = run_experiment(plan, {config}, settings.seed, 1, sim);
        const ExperimentPoint& point = points.front();
        for (size_t r = 0; r < point.runs.size(); ++r) {
            const ErrorEstimate& e = point.runs[r];
            table.rows.push_back(
                {fmt(static_cast<long>(r)), fmt(e.seed), fmt(e.trials), fmt(e.errors), fmt(e.p_hat), fmt(e.sigma)});
        }
        table.add_meta("pooled_mean", fmt(point.pooled_mean));
        table.add_meta("stddev_runs", fmt(point.stddev_runs));
        table.add_meta("sigma_binomial", fmt(point.sigma_binomial));
    }
    return emit_or_dump(common, settings, table, "simulate", out);
}

int cmd_ratio_map(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli, double xi_min, double xi_max,
                  int xi_steps, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    const RatioMap map = ratio_map(linspace(xi_min, xi_max, xi_steps), grid_cli.grid(), settings.m,
                                   settings.noise.eta, sweep_options(settings));
    Table table;
    add_config_meta(table, "ratio-map", settings);
    table.columns = {"xi", "alpha_sq", "beta_opt", "p_error", "p_hom", "log10_ratio"};
    for (const auto& c : map.cells) {
        table.rows.push_back(
            {fmt(c.xi), fmt(c.alpha_sq), fmt(c.beta_opt), fmt(c.p_error), fmt(c.p_hom), fmt(c.log10_ratio)});
    }
    Table boundary;
    add_config_meta(boundary, "ratio-map-boundary", settings);
    boundary.columns = {"xi", "alpha_sq"};
    for (const auto& [xi, alpha_sq] : map.boundary) boundary.rows.push_back({fmt(xi), fmt(alpha_sq)});

    if (common.dump_config) {
        out << settings_to_json(settings).dump(2) << "\n";
        return 0;
    }
    common.target.emit(table, "ratio-map", out);
    OutputTarget btarget = common.target;
    btarget.path = common.target.sibling("boundary");
    btarget.emit(boundary, "ratio-map-boundary", out);
    return 0;
}

int cmd_improvement(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli,
                    const std::vector<double>& eta_list, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    const auto rows = improvement_curve(grid_cli.grid(), grid_cli.m_list, settings.noise.xi, eta_list,
                                        sweep_options(settings));
    Table table;
    add_config_meta(table, "improvement", settings);
    table.columns = {"alpha_sq", "m", "eta", "p_error", "p_hom", "improvement"};
    for (const auto& r : rows) {
        table.rows.push_back(
            {fmt(r.alpha_sq), fmt(r.m), fmt(r.eta), fmt(r.p_error), fmt(r.p_hom), fmt(r.improvement)});
    }
    return emit_or_dump(common, settings, table, "improvement", out);
}

int cmd_dark_floor(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli,
                   const std::vector<std::string>& alphabet_names, bool displaced_ook, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    std::vector<AlphabetKind> kinds;
    for (const auto& name : alphabet_names) kinds.push_back(alphabet_kind_from_string(name));
    const DarkFloorResult result = dark_floor_study(kinds, grid_cli.m_list, settings.noise.nu,
                                                    grid_cli.grid(), displaced_ook, sweep_options(settings));
    Table table;
    add_config_meta(table, "dark-floor", settings);
    for (const auto& f : result.floors)
        table.add_meta("floor " + to_string(f.kind) + " m=" + fmt(f.m), fmt(f.p_floor));
    table.columns = {"alphabet", "m", "alpha_sq", "beta", "p_error"};
    for (const auto& r : result.rows) {
        table.rows.push_back({to_string(r.kind), fmt(r.m), fmt(r.alpha_sq), fmt(r.beta), fmt(r.p_error)});
    }
    return emit_or_dump(common, settings, table, "dark-floor", out);
}

int cmd_compare(CommonCli& common, CLI::App* cmd, const GridCli& grid_cli, std::ostream& out) {
    const Settings settings = common.resolve(cmd);
    const auto rows = comparison_study(grid_cli.grid(), sweep_options(settings));
    Table table;
    add_config_meta(table, "compare", settings);
    table.columns = {"preset", "alpha_sq", "p_error"};
    for (const auto& r : rows) table.rows.push_back({r.preset, fmt(r.alpha_sq), fmt(r.p_error)});
    return emit_or_dump(common, settings, table, "compare", out);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Binary coherent-state discrimination with a displaced PNR receiver"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonCli common;
        GridCli grid;
    };

    Sub baselines_sub;
    baselines_sub.cmd = app.add_subcommand("baselines", "homodyne QNL and Helstrom bound");
    baselines_sub.common.attach(baselines_sub.cmd);
    baselines_sub.grid.attach(baselines_sub.cmd);

    Sub curve_sub;
    curve_sub.cmd = app.add_subcommand("error-curve", "error probability vs |alpha|^2 per PNR(m)");
    curve_sub.common.attach(curve_sub.cmd);
    curve_sub.grid.attach(curve_sub.cmd);
    bool curve_simulate = false;
    curve_sub.cmd->add_flag("--simulate", curve_simulate,
                            "overlay Monte Carlo estimates (--trials/--runs/--seed)");

    Sub optimize_sub;
    optimize_sub.cmd = app.add_subcommand("optimize", "globally optimal displacement for one point");
    optimize_sub.common.attach(optimize_sub.cmd);

    Sub landscape_sub;
    landscape_sub.cmd = app.add_subcommand("landscape", "error probability vs displacement");
    landscape_sub.common.attach(landscape_sub.cmd);
    double beta_sq_max = 0.0;
    int landscape_steps = 400;
    landscape_sub.cmd->add_option("--beta-sq-max", beta_sq_max, "landscape upper bound in |beta|^2");
    landscape_sub.cmd->add_option("--steps", landscape_steps, "landscape grid points")
        ->check(CLI::Range(2, 1000000));

    Sub simulate_sub;
    simulate_sub.cmd = app.add_subcommand("simulate", "Monte Carlo error-rate estimate");
    simulate_sub.common.attach(simulate_sub.cmd);

    Sub map_sub;
    map_sub.cmd = app.add_subcommand("ratio-map", "log10(P_E / QNL) over (xi, |alpha|^2)");
    map_sub.common.attach(map_sub.cmd);
    map_sub.grid.attach(map_sub.cmd);
    double xi_min = 0.99, xi_max = 1.0;
    int xi_steps = 60;
    map_sub.cmd->add_option("--xi-min", xi_min, "visibility grid lower bound");
    map_sub.cmd->add_option("--xi-max", xi_max, "visibility grid upper bound");
    map_sub.cmd->add_option("--xi-steps", xi_steps, "visibility grid points")->check(CLI::Range(1, 100000));

    Sub improve_sub;
    improve_sub.cmd = app.add_subcommand("improvement", "QNL-to-strategy error ratio");
    improve_sub.common.attach(improve_sub.cmd);
    improve_sub.grid.attach(improve_sub.cmd);
    std::vector<double> eta_list{0.85, 1.0};
    improve_sub.cmd->add_option("--eta-list", eta_list, "detection efficiencies")->delimiter(',');

    Sub dark_sub;
    dark_sub.cmd = app.add_subcommand("dark-floor", "dark-count error floors per alphabet");
    dark_sub.common.attach(dark_sub.cmd);
    dark_sub.grid.attach(dark_sub.cmd);
    std::vector<std::string> alphabet_names{"bpsk", "ook_peak", "ook_avg"};
    bool displaced_ook = false;
    dark_sub.cmd->add_option("--alphabets", alphabet_names, "alphabets to sweep")->delimiter(',');
    dark_sub.cmd->add_flag("--displaced-ook", displaced_ook, "optimize the displacement for OOK too");

    Sub compare_sub;
    compare_sub.cmd = app.add_subcommand("compare", "state-of-the-art detector presets");
    compare_sub.common.attach(compare_sub.cmd);
    compare_sub.grid.attach(compare_sub.cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (baselines_sub.cmd->parsed()) {
            const bool grid_requested = baselines_sub.cmd->count("--alpha-sq-steps") > 0 ||
                                        baselines_sub.cmd->count("--alpha-sq-min") > 0 ||
                                        baselines_sub.cmd->count("--alpha-sq-max") > 0;
            return cmd_baselines(baselines_sub.common, baselines_sub.cmd, baselines_sub.grid,
                                 grid_requested, out);
        }
        if (curve_sub.cmd->parsed())
            return cmd_error_curve(curve_sub.common, curve_sub.cmd, curve_sub.grid, curve_simulate, out);
        if (optimize_sub.cmd->parsed()) return cmd_optimize(optimize_sub.common, optimize_sub.cmd, out);
        if (landscape_sub.cmd->parsed())
            return cmd_landscape(landscape_sub.common, landscape_sub.cmd, beta_sq_max, landscape_steps, out);
        if (simulate_sub.cmd->parsed()) return cmd_simulate(simulate_sub.common, simulate_sub.cmd, out);
        if (map_sub.cmd->parsed())
            return cmd_ratio_map(map_sub.common, map_sub.cmd, map_sub.grid, xi_min, xi_max, xi_steps, out);
        if (improve_sub.cmd->parsed())
            return cmd_improvement(improve_sub.common, improve_sub.cmd, improve_sub.grid, eta_list, out);
        if (dark_sub.cmd->parsed())
            return cmd_dark_floor(dark_sub.common, dark_sub.cmd, dark_sub.grid, alphabet_names,
                                  displaced_ook, out);
        if (compare_sub.cmd->parsed())
            return cmd_compare(compare_sub.common, compare_sub.cmd, compare_sub.grid, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand selected\n";
    return 2;
}

}  // namespace pnrdisc
