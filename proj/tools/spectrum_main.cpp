// spectrum_main.cpp — command-line front end
//
//   spectrum run   --config <path> | --preset fig1..fig5
//                  [--oracle] [--paper-axis] [--format csv|json]
//                  [--out <path>] [--threads n] [--pairing paper|derived]
//   spectrum sweep (--config <path> | --preset <name>) --axis <name>
//                  --values v1,v2,... [same output flags]
//
// Exit codes: 0 success, 2 config error, 3 numeric/domain error, 4 IO error.
// Failures print a one-line machine-readable JSON object to stderr.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpbspec/config.hpp"
#include "cpbspec/runner.hpp"
#include "cpbspec/version.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string format;
    std::string out_path;
    std::string pairing;
    bool oracle = false;
    bool paper_axis = false;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    auto* cfg = cmd->add_option("--config", o.config_path, "JSON configuration file");
    auto* preset = cmd->add_option("--preset", o.preset_name, "preset name (fig1..fig5)");
    cfg->excludes(preset);
    preset->excludes(cfg);
    cmd->add_flag("--oracle", o.oracle, "run the time-domain oracle and write a report");
    cmd->add_flag("--paper-axis", o.paper_axis,
                  "report offsets as (nu-omega)/lambda instead of (nu-omega)/g");
    cmd->add_option("--format", o.format, "output format (csv or json)");
    cmd->add_option("--out", o.out_path, "output path (sweep: path stem)");
    cmd->add_option("--threads", o.threads, "evaluation threads (0 = hardware)");
    cmd->add_option("--pairing", o.pairing, "weight pairing (paper or derived)");
}

cpbspec::RunConfig load_config(const CommonOpts& o) {
    cpbspec::RunConfig cfg;
    if (!o.preset_name.empty()) {
        cfg = cpbspec::preset(o.preset_name);
    } else if (!o.config_path.empty()) {
        std::ifstream in(o.config_path, std::ios::binary);
        if (!in)
            throw cpbspec::io_error("cannot read config file \"" + o.config_path + "\"");
        std::ostringstream text;
        text << in.rdbuf();
        cfg = cpbspec::parse_config(text.str());
    } else {
        throw cpbspec::config_error("one of --config or --preset is required");
    }
    if (o.oracle) cfg.oracle.enabled = true;
    if (o.paper_axis) cfg.paper_axis = true;
    if (!o.format.empty()) {
        if (o.format == "csv") cfg.output.format = cpbspec::OutputFormat::csv;
        else if (o.format == "json") cfg.output.format = cpbspec::OutputFormat::json;
        else throw cpbspec::config_error("--format must be csv or json");
    }
    if (!o.out_path.empty()) cfg.output.path = o.out_path;
    if (o.threads >= 0) cfg.threads = o.threads;
    if (!o.pairing.empty()) {
        if (o.pairing == "paper") cfg.spectrum.pairing = cpbspec::WeightPairing::paper;
        else if (o.pairing == "derived") cfg.spectrum.pairing = cpbspec::WeightPairing::derived;
        else throw cpbspec::config_error("--pairing must be paper or derived");
    }
    return cfg;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw cpbspec::config_error("sweep: bad value \"" + item + "\" in --values");
        }
    }
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transient fluorescence spectra of a voltage-biased charge "
                 "qubit coupled to a single cavity mode"};
    app.set_version_flag("--version", std::string(cpbspec::version));
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "evaluate one spectrum");
    add_common(run_cmd, run_opts);

    CommonOpts sweep_opts;
    std::string axis;
    std::string values_list;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per value of a parameter axis");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--axis", axis, "swept parameter (delta, gamma, eta, M, alpha2)")
        ->required();
    sweep_cmd->add_option("--values", values_list, "comma-separated list of values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        cpbspec::config_error wrapped(e.what());
        std::cerr << cpbspec::error_json(wrapped) << "\n";
        return 2;
    }

    try {
        if (run_cmd->parsed()) {
            const cpbspec::RunArtifacts art = cpbspec::run(load_config(run_opts));
            std::cout << art.series_path << "\n";
            if (!art.report_path.empty()) std::cout << art.report_path << "\n";
        } else {
            const cpbspec::RunConfig cfg = load_config(sweep_opts);
            const cpbspec::SweepArtifacts art = cpbspec::sweep(cfg, axis, parse_values(values_list));
            for (const std::string& p : art.run_paths) std::cout << p << "\n";
            std::cout << art.index_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << cpbspec::error_json(e) << "\n";
        return cpbspec::exit_code_for(e);
    }
    return 0;
}
