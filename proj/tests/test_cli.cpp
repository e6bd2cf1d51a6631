#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnrdisc/cli.hpp"
#include "pnrdisc/config_io.hpp"

using namespace pnrdisc;
using nlohmann::json;

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_command(args, out, err);
    return {status, out.str(), err.str()};
}

// Parses "# key = value" metadata comments from CSV output.
std::string meta_value(const std::string& text, const std::string& key) {
    std::istringstream stream(text);
    std::string line;
    const std::string prefix = "# " + key + " = ";
    while (std::getline(stream, line)) {
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}

// First data row of a CSV table as doubles (non-numeric cells -> NaN).
std::vector<double> first_row(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(stream, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                cells.push_back(std::nan(""));
            }
        }
        return cells;
    }
    return {};
}

}  // namespace

TEST_CASE("baselines subcommand pins the closed forms") {
    const auto result = run({"baselines", "--alpha-sq", "1", "--eta", "1"});
    REQUIRE(result.status == 0);
    const auto row = first_row(result.out);  // alpha_sq, p_hom, p_hom_eta, p_hels
    REQUIRE(row.size() == 4);
    CHECK(std::abs(row[1] - 0.022750) <= 1e-5);
    CHECK(std::abs(row[3] - 0.0046003) <= 1e-5);
}

TEST_CASE("optimize subcommand reports the supplemental minimum") {
    const auto result =
        run({"optimize", "--alpha-sq", "1.6", "--m", "2", "--xi", "0.998", "--eta", "1"});
    REQUIRE(result.status == 0);
    const double beta_opt_sq = std::stod(meta_value(result.out, "beta_opt_sq"));
    CHECK(std::abs(beta_opt_sq - 2.3) <= 0.2);
}

TEST_CASE("simulate subcommand is deterministic and near the closed form") {
    const std::vector<std::string> args{"simulate", "--m",    "1",     "--alpha-sq", "1",
                                        "--xi",     "1",      "--eta", "1",          "--nu",
                                        "0",        "--pap",  "0",     "--beta-mode", "null",
                                        "--trials", "200000", "--seed", "42"};
    const auto first = run(args);
    REQUIRE(first.status == 0);
    const auto again = run(args);
    CHECK(first.out == again.out);

    const auto row = first_row(first.out);  // run, seed, trials, errors, p_hat, sigma
    REQUIRE(row.size() == 6);
    const double expected = 0.5 * std::exp(-4.0);
    const double sigma = std::sqrt(expected * (1.0 - expected) / 200000.0);
    CHECK(std::abs(row[4] - expected) <= 3.0 * sigma);
}

TEST_CASE("invalid input fails with a named diagnostic") {
    const auto unknown_flag = run({"baselines", "--frobnicate"});
    CHECK(unknown_flag.status != 0);

    const auto bad_xi = run({"error-curve", "--xi", "1.5"});
    CHECK(bad_xi.status != 0);
    CHECK(bad_xi.err.find("xi") != std::string::npos);

    const auto bad_m = run({"optimize", "--m", "0"});
    CHECK(bad_m.status != 0);
    CHECK(bad_m.err.find("m") != std::string::npos);

    const auto no_sub = run({});
    CHECK(no_sub.status != 0);
}

TEST_CASE("config files load, flags override, dump round-trips") {
    const std::string path = "test_cli_config.json";
    {
        std::ofstream file(path);
        file << R"({"alpha_sq": 2.5, "m": 3, "noise": {"xi": 0.99}, "seed": 9})";
    }
    const auto dumped =
        run({"baselines", "--config", path, "--eta", "0.8", "--dump-config"});
    REQUIRE(dumped.status == 0);
    const json doc = json::parse(dumped.out);
    CHECK(doc["alpha_sq"].get<double>() == 2.5);
    CHECK(doc["m"].get<int>() == 3);
    CHECK(doc["noise"]["xi"].get<double>() == 0.99);
    CHECK(doc["noise"]["eta"].get<double>() == 0.8);  // flag override
    CHECK(doc["seed"].get<uint64_t>() == 9);

    // A dumped config reparses to the identical settings.
    const Settings settings = settings_from_json(doc);
    CHECK(settings_to_json(settings) == doc);
    CHECK(settings_from_json(settings_to_json(settings)) == settings);
    std::remove(path.c_str());

    const auto missing = run({"baselines", "--config", "no_such_file.json"});
    CHECK(missing.status != 0);
    CHECK(missing.err.find("no_such_file.json") != std::string::npos);

    const std::string bad_path = "test_cli_bad.json";
    {
        std::ofstream file(bad_path);
        file << "{ not json";
    }
    const auto bad = run({"baselines", "--config", bad_path});
    CHECK(bad.status != 0);
    std::remove(bad_path.c_str());

    const std::string unknown_path = "test_cli_unknown.json";
    {
        std::ofstream file(unknown_path);
        file << R"({"alpha_squared": 1.0})";
    }
    const auto unknown = run({"baselines", "--config", unknown_path});
    CHECK(unknown.status != 0);
    CHECK(unknown.err.find("alpha_squared") != std::string::npos);
    std::remove(unknown_path.c_str());
}

TEST_CASE("fixed beta mode parses the inline value") {
    const auto result = run({"simulate", "--alpha-sq", "1", "--beta-mode", "fixed:0.5", "--trials",
                             "1000", "--seed", "1", "--dump-config"});
    REQUIRE(result.status == 0);
    const json doc = json::parse(result.out);
    CHECK(doc["beta_mode"].get<std::string>() == "fixed");
    CHECK(doc["beta"].get<double>() == 0.5);
}

TEST_CASE("landscape and error-curve emit well-formed tables") {
    const auto landscape = run({"landscape", "--alpha-sq", "1.6", "--m", "2", "--xi", "0.998",
                                "--steps", "50"});
    REQUIRE(landscape.status == 0);
    CHECK(first_row(landscape.out).size() == 3);

    const auto curve = run({"error-curve", "--alpha-sq-min", "0.5", "--alpha-sq-max", "2",
                            "--alpha-sq-steps", "4", "--m-list", "1,2", "--xi", "0.998"});
    REQUIRE(curve.status == 0);
    const auto row = first_row(curve.out);
    REQUIRE(row.size() == 11);
    // columns: alpha_sq, m, xi, eta, nu, p_ap, beta_opt, p_error, p_hom, p_hom_eta, p_hels
    CHECK(row[0] == 0.5);
    CHECK(row[1] == 1.0);
    CHECK(row[2] == 0.998);

    // Monte Carlo overlay: analytic and sampled errors agree statistically.
    const auto overlay = run({"error-curve", "--alpha-sq-min", "1", "--alpha-sq-max", "1",
                              "--alpha-sq-steps", "1", "--m-list", "1", "--simulate", "--trials",
                              "100000", "--seed", "7"});
    REQUIRE(overlay.status == 0);
    const auto orow = first_row(overlay.out);
    REQUIRE(orow.size() == 15);
    const double p_error = orow[7];
    const double p_hat = orow[11];
    const double sigma = std::sqrt(p_error * (1.0 - p_error) / 100000.0);
    CHECK(std::abs(p_hat - p_error) <= 4.0 * sigma);

    const auto json_out = run({"baselines", "--alpha-sq", "1", "--format", "json"});
    REQUIRE(json_out.status == 0);
    const json doc = json::parse(json_out.out);
    CHECK(doc["command"] == "baselines");
    CHECK(doc["rows"].size() == 1);
}

TEST_CASE("thread count resolves from settings then environment") {
    Settings settings;
    settings.threads = 3;
    CHECK(resolve_threads(settings) == 3);
    settings.threads = 0;
    setenv("PNRDISC_THREADS", "5", 1);
    CHECK(resolve_threads(settings) == 5);
    unsetenv("PNRDISC_THREADS");
    CHECK(resolve_threads(settings) >= 1);
}

TEST_CASE("output lands in a file when --out is given") {
    const std::string path = "test_cli_out.csv";
    const auto result = run({"baselines", "--alpha-sq", "1", "--out", path});
    REQUIRE(result.status == 0);
    CHECK(result.out.empty());
    std::ifstream file(path);
    REQUIRE(file.good());
    std::stringstream content;
    content << file.rdbuf();
    CHECK(content.str().find("p_hels") != std::string::npos);
    CHECK(content.str().find("# config = ") != std::string::npos);
    std::remove(path.c_str());
}
