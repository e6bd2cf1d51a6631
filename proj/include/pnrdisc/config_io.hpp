#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pnrdisc/model.hpp"
#include "pnrdisc/photostats.hpp"

// JSON configuration document mirroring the domain types, shared by the CLI
// subcommands. Unknown keys and out-of-range values are rejected with the
// offending field named.

namespace pnrdisc {

struct Settings {
    AlphabetKind alphabet = AlphabetKind::Bpsk;
    double alpha_sq = 1.0;
    int m = 1;
    NoiseModel noise;
    double p_h1 = 0.5;
    std::string beta_mode = "opt";  // "opt" | "null" | "fixed"
    double beta = 0.0;              // displacement when beta_mode == "fixed"
    AfterpulseModel ap_model = AfterpulseModel::Cascade;
    long trials = 100000;
    int runs = 1;
    uint64_t seed = 1;
    int threads = 0;  // 0: PNRDISC_THREADS env var, then hardware concurrency

    bool operator==(const Settings&) const = default;
};

nlohmann::json settings_to_json(const Settings& settings);
Settings settings_from_json(const nlohmann::json& doc);
Settings load_settings_file(const std::string& path);

// Displacement for the "null" mode: beta = alpha for BPSK (displacement to
// vacuum), beta = 0 for OOK (the off-state is already vacuum).
double nulling_displacement(const Alphabet& alphabet);

// Receiver at the settings' displacement. "opt" runs the global optimizer.
ReceiverConfig make_receiver(const Settings& settings);

// Resolved worker count: explicit > env PNRDISC_THREADS > hardware.
int resolve_threads(const Settings& settings);

}  // namespace pnrdisc
