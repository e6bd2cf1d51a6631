#include "pnrdisc/config_io.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "pnrdisc/optimize.hpp"

namespace pnrdisc {

using nlohmann::json;

nlohmann::json settings_to_json(const Settings& s) {
    json doc;
    doc["alphabet"] = to_string(s.alphabet);
    doc["alpha_sq"] = s.alpha_sq;
    doc["m"] = s.m;
    doc["noise"] = {{"xi", s.noise.xi}, {"eta", s.noise.eta}, {"nu", s.noise.nu}, {"p_ap", s.noise.p_ap}};
    doc["priors"] = {{"p_h1", s.p_h1}};
    doc["beta_mode"] = s.beta_mode;
    doc["beta"] = s.beta;
    doc["ap_model"] = to_string(s.ap_model);
    doc["trials"] = s.trials;
    doc["runs"] = s.runs;
    doc["seed"] = s.seed;
    doc["threads"] = s.threads;
    return doc;
}

namespace {

template <typename T>
T field_as(const json& doc, const std::string& key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument("config: field '" + key + "' has the wrong type");
    }
}

}  // namespace

Settings settings_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: document must be a JSON object");
    static const char* known[] = {"alphabet", "alpha_sq", "m",      "noise", "priors", "beta_mode",
                                  "beta",     "ap_model", "trials", "runs",  "seed",   "threads"};
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw std::invalid_argument("config: unknown field '" + item.key() + "'");
    }

    Settings s;
    if (doc.contains("alphabet")) s.alphabet = alphabet_kind_from_string(field_as<std::string>(doc, "alphabet"));
    if (doc.contains("alpha_sq")) s.alpha_sq = field_as<double>(doc, "alpha_sq");
    if (!(s.alpha_sq >= 0.0)) throw std::invalid_argument("config: alpha_sq must be >= 0");
    if (doc.contains("m")) s.m = field_as<int>(doc, "m");
    if (doc.contains("noise")) {
        const json& n = doc.at("noise");
        if (!n.is_object()) throw std::invalid_argument("config: noise must be an object");
        for (const auto& item : n.items()) {
            if (item.key() != "xi" && item.key() != "eta" && item.key() != "nu" && item.key() != "p_ap")
                throw std::invalid_argument("config: unknown noise field '" + item.key() + "'");
        }
        if (n.contains("xi")) s.noise.xi = field_as<double>(n, "xi");
        if (n.contains("eta")) s.noise.eta = field_as<double>(n, "eta");
        if (n.contains("nu")) s.noise.nu = field_as<double>(n, "nu");
        if (n.contains("p_ap")) s.noise.p_ap = field_as<double>(n, "p_ap");
    }
    if (doc.contains("priors")) {
        const json& p = doc.at("priors");
        if (!p.is_object() || !p.contains("p_h1"))
            throw std::invalid_argument("config: priors must be an object with p_h1");
        s.p_h1 = field_as<double>(p, "p_h1");
    }
    if (doc.contains("beta_mode")) s.beta_mode = field_as<std::string>(doc, "beta_mode");
    if (doc.contains("beta")) s.beta = field_as<double>(doc, "beta");
    if (doc.contains("ap_model")) s.ap_model = afterpulse_model_from_string(field_as<std::string>(doc, "ap_model"));
    if (doc.contains("trials")) s.trials = field_as<long>(doc, "trials");
    if (doc.contains("runs")) s.runs = field_as<int>(doc, "runs");
    if (doc.contains("seed")) s.seed = field_as<uint64_t>(doc, "seed");
    if (doc.contains("threads")) s.threads = field_as<int>(doc, "threads");

    // "fixed:<value>" folds the displacement into the mode string.
    if (s.beta_mode.rfind("fixed:", 0) == 0) {
        try {
            s.beta = std::stod(s.beta_mode.substr(6));
        } catch (const std::exception&) {
            throw std::invalid_argument("config: beta_mode fixed:<value> has an unparseable value");
        }
        s.beta_mode = "fixed";
    }
    if (s.beta_mode != "opt" && s.beta_mode != "null" && s.beta_mode != "fixed")
        throw std::invalid_argument("config: beta_mode must be opt, null, or fixed[:<value>]");
    if (s.beta_mode == "fixed" && !(s.beta >= 0.0))
        throw std::invalid_argument("config: beta must be >= 0");
    if (s.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (s.runs < 1) throw std::invalid_argument("config: runs must be >= 1");

    // Range checks with field names.
    NoiseModel(s.noise.xi, s.noise.eta, s.noise.nu, s.noise.p_ap);
    PnrResolution(s.m);
    Priors(s.p_h1);
    return s;
}

Settings load_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return settings_from_json(doc);
}

double nulling_displacement(const Alphabet& alphabet) {
    return alphabet.kind == AlphabetKind::Bpsk ? alphabet.alpha : 0.0;
}

ReceiverConfig make_receiver(const Settings& s) {
    ReceiverConfig config;
    config.alphabet = Alphabet(s.alphabet, std::sqrt(s.alpha_sq));
    config.resolution = PnrResolution(s.m);
    config.noise = s.noise;
    config.priors = Priors(s.p_h1);
    if (s.beta_mode == "fixed") {
        config.beta = s.beta;
    } else if (s.beta_mode == "null") {
        config.beta = nulling_displacement(config.alphabet);
    } else {
        OptimizeOptions opt;
        opt.count.ap_model = s.ap_model;
        config.beta = optimize_displacement(config.alphabet, s.m, s.noise, opt).beta_opt;
    }
    config.validate();
    return config;
}

int resolve_threads(const Settings& settings) {
    if (settings.threads > 0) return settings.threads;
    if (const char* env = std::getenv("PNRDISC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace pnrdisc
