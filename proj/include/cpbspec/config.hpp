// config.hpp — run configuration: strict JSON parsing, serialization, and
// the fig1..fig5 presets.
//
// Config documents are strict: unknown keys are rejected by name, and
// exactly one of "params" (canonical) or "device_params" (raw device
// constants) must be present. Every field not supplied takes the default
// recorded here, so parse(serialize(cfg)) == cfg for any valid cfg.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpbspec/errors.hpp"
#include "cpbspec/field_states.hpp"
#include "cpbspec/params.hpp"
#include "cpbspec/spectrum.hpp"

namespace cpbspec {

struct GridSpec {
    double min_offset = -12.0; // in units of g, relative to omega
    double max_offset = 12.0;
    int points = 2001;

    bool operator==(const GridSpec&) const = default;
};

struct FieldSpec {
    FieldKind kind = FieldKind::vacuum;
    double eta = 0.0;           // binomial
    int m = 0;                  // binomial / number
    double alpha_sq = 0.0;      // coherent
    double tail_epsilon = 1e-12;

    bool operator==(const FieldSpec&) const = default;
};

struct OracleSpec {
    bool enabled = false;
    int n_max = 0;        // 0 = choose from the distribution
    double t_avg = 0.0;   // 0 = default window
    double tau_max = 0.0; // 0 = default 8/gamma
    int n_t = 2048;
    int n_tau = 2048;

    bool operator==(const OracleSpec&) const = default;
};

enum class OutputFormat { csv, json };

inline const char* to_string(OutputFormat f) {
    return f == OutputFormat::csv ? "csv" : "json";
}

struct OutputSpec {
    OutputFormat format = OutputFormat::csv;
    std::string path; // empty = derived from the run kind

    bool operator==(const OutputSpec&) const = default;
};

struct SpectrumSpec {
    double gamma = 0.0;
    GridSpec grid;
    int transition_order = 1;
    WeightPairing pairing = WeightPairing::paper;
    bool allow_experimental_order = false;
    double weight_floor = 1e-14;

    bool operator==(const SpectrumSpec&) const = default;
};

struct RunConfig {
    std::optional<CanonicalParams> params;
    std::optional<DeviceParams> device;
    FieldSpec field;
    SpectrumSpec spectrum;
    OracleSpec oracle;
    OutputSpec output;
    bool paper_axis = false; // report offsets in units of lambda = g/sqrt(2)
    int threads = 0;         // 0 = hardware concurrency

    bool operator==(const RunConfig& o) const {
        auto dev_eq = [](const DeviceParams& a, const DeviceParams& b) {
            return a.junction_capacitance == b.junction_capacitance &&
                   a.gate_capacitance == b.gate_capacitance &&
                   a.josephson_energy == b.josephson_energy &&
                   a.cavity_frequency == b.cavity_frequency &&
                   a.electron_charge == b.electron_charge && a.hbar == b.hbar;
        };
        if (params != o.params) return false;
        if (device.has_value() != o.device.has_value()) return false;
        if (device && !dev_eq(*device, *o.device)) return false;
        return field == o.field && spectrum == o.spectrum && oracle == o.oracle &&
               output == o.output && paper_axis == o.paper_axis && threads == o.threads;
    }
};

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    if (!j.is_object())
        throw config_error("config: \"" + where + "\" must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) { known = true; break; }
        if (!known)
            throw config_error("config: unknown key \"" + item.key() + "\" in " + where);
    }
}

inline double get_number(const json& j, const char* key, const std::string& where,
                         std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw config_error("config: missing key \"" + std::string(key) + "\" in " + where);
    }
    if (!j.at(key).is_number())
        throw config_error("config: key \"" + std::string(key) + "\" in " + where +
                           " must be a number");
    return j.at(key).get<double>();
}

inline int get_int(const json& j, const char* key, const std::string& where,
                   std::optional<int> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw config_error("config: missing key \"" + std::string(key) + "\" in " + where);
    }
    if (!j.at(key).is_number_integer())
        throw config_error("config: key \"" + std::string(key) + "\" in " + where +
                           " must be an integer");
    return j.at(key).get<int>();
}

inline bool get_bool(const json& j, const char* key, const std::string& where, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw config_error("config: key \"" + std::string(key) + "\" in " + where +
                           " must be a boolean");
    return j.at(key).get<bool>();
}

inline std::string get_string(const json& j, const char* key, const std::string& where,
                              std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw config_error("config: missing key \"" + std::string(key) + "\" in " + where);
    }
    if (!j.at(key).is_string())
        throw config_error("config: key \"" + std::string(key) + "\" in " + where +
                           " must be a string");
    return j.at(key).get<std::string>();
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    using detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    detail::require_keys(j,
                         {"params", "device_params", "field", "spectrum", "oracle", "output",
                          "paper_axis", "threads"},
                         "config");

    RunConfig cfg;
    const bool has_params = j.contains("params");
    const bool has_device = j.contains("device_params");
    if (has_params == has_device)
        throw config_error("config: exactly one of \"params\" and \"device_params\" "
                           "must be supplied");
    if (has_params) {
        const json& p = j.at("params");
        detail::require_keys(p, {"omega", "delta", "g"}, "params");
        CanonicalParams cp;
        cp.omega = detail::get_number(p, "omega", "params");
        cp.delta = detail::get_number(p, "delta", "params");
        cp.g = detail::get_number(p, "g", "params");
        cp.validate();
        cfg.params = cp;
    } else {
        const json& p = j.at("device_params");
        detail::require_keys(p,
                             {"junction_capacitance", "gate_capacitance", "josephson_energy",
                              "cavity_frequency", "electron_charge", "hbar"},
                             "device_params");
        DeviceParams dp;
        dp.junction_capacitance = detail::get_number(p, "junction_capacitance", "device_params");
        dp.gate_capacitance = detail::get_number(p, "gate_capacitance", "device_params");
        dp.josephson_energy = detail::get_number(p, "josephson_energy", "device_params");
        dp.cavity_frequency = detail::get_number(p, "cavity_frequency", "device_params");
        dp.electron_charge = detail::get_number(p, "electron_charge", "device_params");
        dp.hbar = detail::get_number(p, "hbar", "device_params", 1.0);
        dp.validate();
        cfg.device = dp;
    }

    if (!j.contains("field"))
        throw config_error("config: missing key \"field\"");
    {
        const json& f = j.at("field");
        detail::require_keys(f, {"kind", "eta", "M", "mean_photons", "tail_epsilon"}, "field");
        const std::string kind = detail::get_string(f, "kind", "field");
        if (kind == "vacuum") {
            cfg.field.kind = FieldKind::vacuum;
        } else if (kind == "binomial") {
            cfg.field.kind = FieldKind::binomial;
            cfg.field.eta = detail::get_number(f, "eta", "field");
            cfg.field.m = detail::get_int(f, "M", "field");
        } else if (kind == "coherent") {
            cfg.field.kind = FieldKind::coherent;
            cfg.field.alpha_sq = detail::get_number(f, "mean_photons", "field");
            cfg.field.tail_epsilon = detail::get_number(f, "tail_epsilon", "field", 1e-12);
        } else if (kind == "number") {
            cfg.field.kind = FieldKind::number;
            cfg.field.m = detail::get_int(f, "M", "field");
        } else {
            throw config_error("config: unknown field kind \"" + kind + "\"");
        }
    }

    if (!j.contains("spectrum"))
        throw config_error("config: missing key \"spectrum\"");
    {
        const json& s = j.at("spectrum");
        detail::require_keys(s,
                             {"gamma", "grid", "transition_order", "weight_pairing",
                              "allow_experimental_order", "weight_floor"},
                             "spectrum");
        cfg.spectrum.gamma = detail::get_number(s, "gamma", "spectrum");
        if (s.contains("grid")) {
            const json& g = s.at("grid");
            detail::require_keys(g, {"min_offset", "max_offset", "points"}, "spectrum.grid");
            cfg.spectrum.grid.min_offset =
                detail::get_number(g, "min_offset", "spectrum.grid", -12.0);
            cfg.spectrum.grid.max_offset =
                detail::get_number(g, "max_offset", "spectrum.grid", 12.0);
            cfg.spectrum.grid.points = detail::get_int(g, "points", "spectrum.grid", 2001);
        }
        cfg.spectrum.transition_order = detail::get_int(s, "transition_order", "spectrum", 1);
        const std::string pairing =
            detail::get_string(s, "weight_pairing", "spectrum", std::string("paper"));
        if (pairing == "paper")
            cfg.spectrum.pairing = WeightPairing::paper;
        else if (pairing == "derived")
            cfg.spectrum.pairing = WeightPairing::derived;
        else
            throw config_error("config: weight_pairing must be \"paper\" or \"derived\"");
        cfg.spectrum.allow_experimental_order =
            detail::get_bool(s, "allow_experimental_order", "spectrum", false);
        cfg.spectrum.weight_floor = detail::get_number(s, "weight_floor", "spectrum", 1e-14);
    }

    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        detail::require_keys(o, {"enabled", "n_max", "t_avg", "tau_max", "n_t", "n_tau"},
                             "oracle");
        cfg.oracle.enabled = detail::get_bool(o, "enabled", "oracle", false);
        cfg.oracle.n_max = detail::get_int(o, "n_max", "oracle", 0);
        cfg.oracle.t_avg = detail::get_number(o, "t_avg", "oracle", 0.0);
        cfg.oracle.tau_max = detail::get_number(o, "tau_max", "oracle", 0.0);
        cfg.oracle.n_t = detail::get_int(o, "n_t", "oracle", 2048);
        cfg.oracle.n_tau = detail::get_int(o, "n_tau", "oracle", 2048);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        detail::require_keys(o, {"format", "path"}, "output");
        const std::string fmt = detail::get_string(o, "format", "output", std::string("csv"));
        if (fmt == "csv")
            cfg.output.format = OutputFormat::csv;
        else if (fmt == "json")
            cfg.output.format = OutputFormat::json;
        else
            throw config_error("config: output format must be \"csv\" or \"json\"");
        cfg.output.path = detail::get_string(o, "path", "output", std::string());
    }

    cfg.paper_axis = detail::get_bool(j, "paper_axis", "config", false);
    if (j.contains("threads")) cfg.threads = detail::get_int(j, "threads", "config", 0);
    if (cfg.threads < 0)
        throw config_error("config: threads must be >= 0");
    return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    if (cfg.params) {
        j["params"] = {{"omega", cfg.params->omega},
                       {"delta", cfg.params->delta},
                       {"g", cfg.params->g}};
    } else if (cfg.device) {
        j["device_params"] = {{"junction_capacitance", cfg.device->junction_capacitance},
                              {"gate_capacitance", cfg.device->gate_capacitance},
                              {"josephson_energy", cfg.device->josephson_energy},
                              {"cavity_frequency", cfg.device->cavity_frequency},
                              {"electron_charge", cfg.device->electron_charge},
                              {"hbar", cfg.device->hbar}};
    }
    nlohmann::json f{{"kind", to_string(cfg.field.kind)}};
    if (cfg.field.kind == FieldKind::binomial) {
        f["eta"] = cfg.field.eta;
        f["M"] = cfg.field.m;
    } else if (cfg.field.kind == FieldKind::coherent) {
        f["mean_photons"] = cfg.field.alpha_sq;
        f["tail_epsilon"] = cfg.field.tail_epsilon;
    } else if (cfg.field.kind == FieldKind::number) {
        f["M"] = cfg.field.m;
    }
    j["field"] = f;
    j["spectrum"] = {{"gamma", cfg.spectrum.gamma},
                     {"grid",
                      {{"min_offset", cfg.spectrum.grid.min_offset},
                       {"max_offset", cfg.spectrum.grid.max_offset},
                       {"points", cfg.spectrum.grid.points}}},
                     {"transition_order", cfg.spectrum.transition_order},
                     {"weight_pairing", to_string(cfg.spectrum.pairing)},
                     {"allow_experimental_order", cfg.spectrum.allow_experimental_order},
                     {"weight_floor", cfg.spectrum.weight_floor}};
    j["oracle"] = {{"enabled", cfg.oracle.enabled},   {"n_max", cfg.oracle.n_max},
                   {"t_avg", cfg.oracle.t_avg},       {"tau_max", cfg.oracle.tau_max},
                   {"n_t", cfg.oracle.n_t},           {"n_tau", cfg.oracle.n_tau}};
    j["output"] = {{"format", to_string(cfg.output.format)}, {"path", cfg.output.path}};
    j["paper_axis"] = cfg.paper_axis;
    j["threads"] = cfg.threads;
    return j;
}

inline std::string serialize_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2); }

// Canned parameter sets. All of them use omega = 50 g, g = 1, gamma = 0.1 g
// and the default display grid; the absolute cavity frequency only shifts
// the band, so it is pinned well above the coupling scale to keep the
// low-frequency lines of the "paper" pairing outside the display window.
inline std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5"};
}

inline RunConfig preset(const std::string& name) {
    RunConfig cfg;
    cfg.params = CanonicalParams{50.0, 0.0, 1.0};
    cfg.spectrum.gamma = 0.1;
    if (name == "fig1") {
        cfg.field.kind = FieldKind::coherent;
        cfg.field.alpha_sq = 10.0;
    } else if (name == "fig2" || name == "fig4" || name == "fig5") {
        cfg.field.kind = FieldKind::binomial;
        cfg.field.eta = 0.7;
        cfg.field.m = 3;
        if (name == "fig4") cfg.params->delta = 1.0;
        if (name == "fig5") cfg.params->delta = 2.0;
    } else if (name == "fig3") {
        cfg.field.kind = FieldKind::binomial;
        cfg.field.eta = 0.7;
        cfg.field.m = 30;
    } else {
        throw config_error("unknown preset \"" + name + "\" (expected fig1..fig5)");
    }
    return cfg;
}

// Materialize the field described by a config.
inline PhotonDistribution make_field(const FieldSpec& spec) {
    switch (spec.kind) {
    case FieldKind::vacuum: return vacuum();
    case FieldKind::binomial: return binomial_distribution(spec.eta, spec.m);
    case FieldKind::coherent: return coherent_distribution(spec.alpha_sq, spec.tail_epsilon);
    case FieldKind::number: return number_state(spec.m);
    case FieldKind::custom: break;
    }
    throw config_error("config: field kind not constructible from a config document");
}

} // namespace cpbspec
