// runner.hpp — executes a RunConfig: spectrum evaluation, optional oracle
// cross-check, and bit-stable CSV/JSON serialization of the artifacts.

#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "cpbspec/config.hpp"
#include "cpbspec/errors.hpp"
#include "cpbspec/oracle.hpp"
#include "cpbspec/spectrum.hpp"
#include "cpbspec/version.hpp"

namespace cpbspec {

// Shortest round-trip decimal form (up to 17 significant digits); the
// same bytes on every run and platform.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw domain_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

// CSV schema: header "nu_offset,S", one row per sample. Offsets are
// (nu - omega)/g, or (nu - omega)/lambda with paper_axis (a factor
// sqrt(2), since lambda = g/sqrt(2)).
inline std::string series_to_csv(const SpectrumSeries& s, bool paper_axis = false) {
    const double scale = paper_axis ? std::numbers::sqrt2 : 1.0;
    std::string out = "nu_offset,S\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double offset = scale * (s.config.nu_grid[i] - s.params.omega) / s.params.g;
        out += format_double(offset);
        out += ',';
        out += format_double(s.values[i]);
        out += '\n';
    }
    return out;
}

inline nlohmann::json field_to_json(const FieldSummary& f) {
    nlohmann::json j{{"kind", to_string(f.provenance.kind)},
                     {"mean_photons", f.mean_photons},
                     {"support", {f.min_support, f.max_support}}};
    if (f.provenance.kind == FieldKind::binomial) {
        j["eta"] = f.provenance.eta;
        j["M"] = f.provenance.m;
    } else if (f.provenance.kind == FieldKind::coherent) {
        j["alpha_sq"] = f.provenance.alpha_sq;
        j["tail_epsilon"] = f.provenance.tail_epsilon;
    } else if (f.provenance.kind == FieldKind::number) {
        j["M"] = f.provenance.m;
    }
    return j;
}

inline nlohmann::json series_to_json(const SpectrumSeries& s, bool paper_axis = false) {
    const double scale = paper_axis ? std::numbers::sqrt2 : 1.0;
    nlohmann::json j;
    j["version"] = std::string(version);
    j["source"] = s.source;
    j["params"] = {{"omega", s.params.omega},
                   {"delta", s.params.delta},
                   {"g", s.params.g},
                   {"paper_lambda", s.params.paper_lambda()}};
    j["field"] = field_to_json(s.field);
    j["spectrum"] = {{"gamma", s.config.gamma},
                     {"transition_order", s.config.transition_order},
                     {"weight_pairing", to_string(s.config.pairing)},
                     {"weight_floor", s.config.weight_floor},
                     {"axis", paper_axis ? "paper_lambda" : "g"}};
    nlohmann::json lines = nlohmann::json::array();
    for (const TransitionLine& line : s.lines)
        lines.push_back({{"center", line.center},
                         {"weight", line.weight},
                         {"source_n", line.source_n},
                         {"branch", to_string(line.branch)}});
    j["lines"] = lines;
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < s.values.size(); ++i)
        samples.push_back({scale * (s.config.nu_grid[i] - s.params.omega) / s.params.g,
                           s.values[i]});
    j["samples"] = samples;

    const PeakSearchResult peaks = find_peaks(s);
    nlohmann::json jp = nlohmann::json::array();
    for (const Peak& p : peaks.peaks) {
        const double off = (p.nu - s.params.omega) / s.params.g;
        jp.push_back({{"nu_offset", off},
                      {"nu_offset_paper_lambda", off * std::numbers::sqrt2},
                      {"height", p.height}});
    }
    j["peaks"] = jp;
    j["grid_coarse_warning"] = peaks.grid_too_coarse;
    return j;
}

inline nlohmann::json comparison_to_json(const ComparisonReport& r) {
    nlohmann::json j;
    j["l2_relative"] = r.l2_relative;
    j["grid_step"] = r.grid_step;
    j["max_matched_distance"] = r.max_matched_distance;
    j["all_peaks_matched"] = r.all_peaks_matched;
    j["peaks_within_one_step"] = r.peaks_within_one_step;
    j["verdict"] = r.verdict;
    nlohmann::json matched = nlohmann::json::array();
    for (const PeakMatch& m : r.matched)
        matched.push_back({{"center_analytic", m.center_a},
                           {"center_oracle", m.center_b},
                           {"distance", m.distance},
                           {"height_ratio", m.height_ratio}});
    j["matched"] = matched;
    auto peaks_json = [](const std::vector<Peak>& ps) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Peak& p : ps) arr.push_back({{"nu", p.nu}, {"height", p.height}});
        return arr;
    };
    j["unmatched_analytic"] = peaks_json(r.unmatched_a);
    j["unmatched_oracle"] = peaks_json(r.unmatched_b);
    return j;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open \"" + path + "\" for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw io_error("write failed for \"" + path + "\"");
}

struct RunArtifacts {
    SpectrumSeries series;
    std::string series_path;
    std::optional<nlohmann::json> report;
    std::string report_path;
};

namespace detail {

inline std::string output_stem(const std::string& path) {
    const std::filesystem::path p(path);
    std::filesystem::path stem = p;
    stem.replace_extension();
    return stem.string();
}

} // namespace detail

// Execute one configuration: evaluate the spectrum, write the series
// artifact, and (with the oracle enabled) write `<stem>_report.json`
// comparing the time-domain spectrum against both pairing hypotheses.
// Outputs depend only on the config contents.
inline RunArtifacts run(const RunConfig& cfg) {
    const CanonicalParams p = cfg.params ? *cfg.params : canonicalize(*cfg.device);
    p.validate();
    const PhotonDistribution d = make_field(cfg.field);

    SpectrumConfig sc;
    sc.gamma = cfg.spectrum.gamma;
    sc.nu_grid = default_nu_grid(p, cfg.spectrum.grid.min_offset, cfg.spectrum.grid.max_offset,
                                 cfg.spectrum.grid.points);
    sc.transition_order = cfg.spectrum.transition_order;
    sc.pairing = cfg.spectrum.pairing;
    sc.allow_experimental_order = cfg.spectrum.allow_experimental_order;
    sc.weight_floor = cfg.spectrum.weight_floor;

    RunArtifacts art{evaluate_grid(p, d, sc, cfg.threads), {}, std::nullopt, {}};

    std::string path = cfg.output.path;
    if (path.empty())
        path = std::string("spectrum_run.") + to_string(cfg.output.format);
    if (cfg.output.format == OutputFormat::csv)
        write_file(path, series_to_csv(art.series, cfg.paper_axis));
    else
        write_file(path, series_to_json(art.series, cfg.paper_axis).dump(2) + "\n");
    art.series_path = path;

    if (cfg.oracle.enabled) {
        const int n_max = cfg.oracle.n_max > 0 ? cfg.oracle.n_max : recommended_n_max(d);
        const TruncatedModel model(p, n_max);
        OracleSettings settings = default_oracle_settings(p, d, sc.gamma);
        if (cfg.oracle.t_avg > 0.0) settings.t_avg = cfg.oracle.t_avg;
        if (cfg.oracle.tau_max > 0.0) settings.tau_max = cfg.oracle.tau_max;
        settings.n_t = cfg.oracle.n_t;
        settings.n_tau = cfg.oracle.n_tau;

        const SpectrumSeries oracle_series =
            time_domain_spectrum(model, d, sc.gamma, sc.nu_grid, settings);

        nlohmann::json report;
        report["version"] = std::string(version);
        report["oracle"] = {{"n_max", n_max},
                            {"t_avg", settings.t_avg},
                            {"tau_max", settings.tau_max},
                            {"n_t", settings.n_t},
                            {"n_tau", settings.n_tau}};
        for (WeightPairing pairing : {WeightPairing::paper, WeightPairing::derived}) {
            SpectrumConfig hc = sc;
            hc.pairing = pairing;
            const SpectrumSeries hyp = (pairing == sc.pairing)
                                           ? art.series
                                           : evaluate_grid(p, d, hc, cfg.threads);
            report["hypotheses"][to_string(pairing)] =
                comparison_to_json(compare_spectra(hyp, oracle_series));
        }
        // Gap between the literal amplitude-product correlation and the
        // exact propagation, over a few beat periods. Informational only.
        const double beat = 2.0 * std::numbers::pi / (2.0 * rabi_splitting(p, d.min_support()));
        report["amplitude_correlation_discrepancy"] =
            max_correlation_discrepancy(model, p, d, 4.0 * beat, 4.0 * beat, 48, 48,
                                        sc.transition_order);
        report["ground_amplitude_convention"] = "negative index evolves as exp(-i omega (n+1/2) tau)";

        art.report = report;
        art.report_path = detail::output_stem(path) + "_report.json";
        write_file(art.report_path, report.dump(2) + "\n");
    }
    return art;
}

struct SweepArtifacts {
    std::vector<std::string> run_paths;
    std::string index_path;
};

// One run per value of the swept axis. Output files are named
// `<stem>_<axis>_<value>.<ext>`; an index JSON lists them all.
inline SweepArtifacts sweep(const RunConfig& base, const std::string& axis,
                            const std::vector<double>& values) {
    static const std::vector<std::string> axes{"delta", "gamma", "eta", "M", "alpha2"};
    bool known = false;
    for (const std::string& a : axes) known = known || a == axis;
    if (!known)
        throw config_error("sweep: unknown axis \"" + axis +
                           "\" (expected delta, gamma, eta, M or alpha2)");
    if (values.empty())
        throw config_error("sweep: empty value list");

    // Validate the whole list before any file is written.
    for (double v : values) {
        if (axis == "delta" && !base.params)
            throw config_error("sweep: delta sweeps need canonical params");
        if (axis == "gamma" && !(v > 0.0))
            throw config_error("sweep: gamma values must be > 0");
        if (axis == "eta" && (base.field.kind != FieldKind::binomial || v < 0.0 || v > 1.0))
            throw config_error("sweep: eta sweeps need a binomial field and values in [0, 1]");
        if (axis == "M" &&
            (base.field.kind == FieldKind::vacuum || base.field.kind == FieldKind::coherent))
            throw config_error("sweep: M sweeps need a binomial or number field");
        if (axis == "alpha2" && (base.field.kind != FieldKind::coherent || v < 0.0))
            throw config_error("sweep: alpha2 sweeps need a coherent field and values >= 0");
    }

    std::string stem = base.output.path.empty() ? std::string("sweep")
                                                : detail::output_stem(base.output.path);
    const std::string ext = std::string(".") + to_string(base.output.format);

    SweepArtifacts art;
    nlohmann::json index;
    index["version"] = std::string(version);
    index["axis"] = axis;
    nlohmann::json runs = nlohmann::json::array();
    for (double v : values) {
        RunConfig cfg = base;
        if (axis == "delta") cfg.params->delta = v;
        else if (axis == "gamma") cfg.spectrum.gamma = v;
        else if (axis == "eta") cfg.field.eta = v;
        else if (axis == "M") cfg.field.m = static_cast<int>(v);
        else if (axis == "alpha2") cfg.field.alpha_sq = v;
        cfg.output.path = stem + "_" + axis + "_" + format_double(v) + ext;
        run(cfg);
        art.run_paths.push_back(cfg.output.path);
        runs.push_back({{"value", v}, {"path", cfg.output.path}});
    }
    index["runs"] = runs;
    art.index_path = stem + "_index.json";
    write_file(art.index_path, index.dump(2) + "\n");
    return art;
}

// Process exit code for an escaped exception: config 2, domain 3, io 4.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const config_error*>(&e)) return 2;
    if (dynamic_cast<const io_error*>(&e)) return 4;
    if (dynamic_cast<const domain_error*>(&e)) return 3;
    return 3;
}

inline std::string error_json(const std::exception& e) {
    nlohmann::json j;
    const char* type = "domain";
    if (dynamic_cast<const config_error*>(&e)) type = "config";
    else if (dynamic_cast<const io_error*>(&e)) type = "io";
    j["error"] = {{"type", type}, {"message", e.what()}};
    return j.dump();
}

} // namespace cpbspec
