#include <catch2/catch.hpp>

#include <filesystem>

#include "cpbspec/config.hpp"
#include "cpbspec/runner.hpp"
#include "test_support.hpp"

using namespace cpbspec;
using test_support::TempDir;
using test_support::read_file;

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_config(
        R"({"params":{"omega":10,"delta":0,"g":1},"field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})");
    REQUIRE(cfg.params.has_value());
    REQUIRE_FALSE(cfg.device.has_value());
    REQUIRE(cfg.params->omega == 10.0);
    REQUIRE(cfg.spectrum.gamma == 0.1);
    REQUIRE(cfg.spectrum.grid.points == 2001);
    REQUIRE(cfg.spectrum.grid.min_offset == -12.0);
    REQUIRE(cfg.spectrum.grid.max_offset == 12.0);
    REQUIRE(cfg.spectrum.transition_order == 1);
    REQUIRE(cfg.spectrum.pairing == WeightPairing::paper);
    REQUIRE(cfg.output.format == OutputFormat::csv);
    REQUIRE_FALSE(cfg.oracle.enabled);
    REQUIRE(cfg.oracle.n_t == 2048);
}

TEST_CASE("strict parsing") {
    SECTION("unknown keys are named") {
        REQUIRE_THROWS_WITH(
            parse_config(R"({"params":{"omega":10,"delta":0,"g":1},"field":{"kind":"vacuum"},)"
                         R"("spectrum":{"gamma":0.1},"unexpected":1})"),
            Catch::Contains("unexpected"));
        REQUIRE_THROWS_WITH(
            parse_config(R"({"params":{"omega":10,"delta":0,"g":1,"typo":2},)"
                         R"("field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})"),
            Catch::Contains("typo"));
    }
    SECTION("syntax errors carry position information") {
        REQUIRE_THROWS_WITH(parse_config("{\n  \"params\": }"), Catch::Contains("line"));
    }
    SECTION("exactly one parameter block") {
        REQUIRE_THROWS_AS(parse_config(R"({"field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})"),
                          config_error);
        REQUIRE_THROWS_AS(
            parse_config(
                R"({"params":{"omega":10,"delta":0,"g":1},)"
                R"("device_params":{"junction_capacitance":1,"gate_capacitance":1,)"
                R"("josephson_energy":4,"cavity_frequency":4,"electron_charge":1,"hbar":1},)"
                R"("field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})"),
            config_error);
    }
    SECTION("domain validation happens at parse time") {
        REQUIRE_THROWS_AS(
            parse_config(
                R"({"params":{"omega":10,"delta":0,"g":-1},"field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})"),
            domain_error);
        REQUIRE_THROWS_AS(
            parse_config(
                R"({"params":{"omega":10,"delta":0,"g":1},"field":{"kind":"squeezed"},"spectrum":{"gamma":0.1}})"),
            config_error);
        REQUIRE_THROWS_AS(
            parse_config(
                R"({"params":{"omega":10,"delta":0,"g":1},"field":{"kind":"vacuum"},)"
                R"("spectrum":{"gamma":0.1,"weight_pairing":"guessed"}})"),
            config_error);
    }
    SECTION("device params are accepted and canonicalized at run time") {
        const RunConfig cfg = parse_config(
            R"({"device_params":{"junction_capacitance":2,"gate_capacitance":2,)"
            R"("josephson_energy":4,"cavity_frequency":4,"electron_charge":2,"hbar":1},)"
            R"("field":{"kind":"vacuum"},"spectrum":{"gamma":0.05}})");
        REQUIRE(cfg.device.has_value());
        REQUIRE(canonicalize(*cfg.device).g == Approx(1.0 / std::sqrt(2.0)));
    }
}

TEST_CASE("config serialization round-trips") {
    RunConfig cfg = preset("fig4");
    cfg.spectrum.pairing = WeightPairing::derived;
    cfg.oracle.enabled = true;
    cfg.oracle.n_max = 20;
    cfg.output.format = OutputFormat::json;
    cfg.output.path = "somewhere.json";
    cfg.paper_axis = true;
    cfg.threads = 3;
    REQUIRE(parse_config(serialize_config(cfg)) == cfg);

    const RunConfig minimal = parse_config(
        R"({"params":{"omega":10,"delta":0,"g":1},"field":{"kind":"vacuum"},"spectrum":{"gamma":0.1}})");
    REQUIRE(parse_config(serialize_config(minimal)) == minimal);

    RunConfig dev;
    dev.device = DeviceParams{2.0, 2.0, 4.0, 4.0, 2.0, 1.0};
    dev.field.kind = FieldKind::coherent;
    dev.field.alpha_sq = 5.0;
    dev.spectrum.gamma = 0.07;
    REQUIRE(parse_config(serialize_config(dev)) == dev);
}

TEST_CASE("presets pin the figure parameters") {
    const RunConfig f1 = preset("fig1");
    REQUIRE(f1.field.kind == FieldKind::coherent);
    REQUIRE(f1.field.alpha_sq == 10.0);
    REQUIRE(f1.params->delta == 0.0);
    REQUIRE(f1.spectrum.gamma == Approx(0.1 * f1.params->g));

    const RunConfig f2 = preset("fig2");
    REQUIRE(f2.field.kind == FieldKind::binomial);
    REQUIRE(f2.field.eta == 0.7);
    REQUIRE(f2.field.m == 3);
    REQUIRE(f2.params->delta == 0.0);

    REQUIRE(preset("fig3").field.m == 30);
    REQUIRE(preset("fig4").params->delta == Approx(preset("fig4").params->g));
    REQUIRE(preset("fig5").params->delta == Approx(2.0 * preset("fig5").params->g));
    REQUIRE_THROWS_AS(preset("fig6"), config_error);
}

TEST_CASE("run writes the CSV artifact deterministically") {
    TempDir tmp;
    RunConfig cfg = preset("fig2");
    cfg.output.path = tmp.path("a.csv");
    const RunArtifacts first = run(cfg);
    REQUIRE(first.series_path == cfg.output.path);
    const std::string bytes_a = read_file(cfg.output.path);

    cfg.output.path = tmp.path("b.csv");
    run(cfg);
    const std::string bytes_b = read_file(cfg.output.path);
    REQUIRE(bytes_a == bytes_b);
    REQUIRE_FALSE(bytes_a.empty());

    // Header plus one row per grid point.
    REQUIRE(bytes_a.rfind("nu_offset,S\n", 0) == 0);
    const std::size_t rows = static_cast<std::size_t>(
        std::count(bytes_a.begin(), bytes_a.end(), '\n'));
    REQUIRE(rows == 2001 + 1);
}

TEST_CASE("paper axis rescales offsets by sqrt(2)") {
    TempDir tmp;
    RunConfig cfg = preset("fig2");
    cfg.output.path = tmp.path("g.csv");
    run(cfg);
    const std::string plain = read_file(cfg.output.path);

    cfg.paper_axis = true;
    cfg.output.path = tmp.path("lambda.csv");
    run(cfg);
    const std::string scaled = read_file(cfg.output.path);

    auto first_offset = [](const std::string& csv) {
        const std::size_t line = csv.find('\n') + 1;
        return std::stod(csv.substr(line, csv.find(',', line) - line));
    };
    REQUIRE(first_offset(scaled) ==
            Approx(first_offset(plain) * std::numbers::sqrt2).epsilon(1e-12));
}

TEST_CASE("json artifact carries the full schema") {
    TempDir tmp;
    RunConfig cfg = preset("fig2");
    cfg.output.format = OutputFormat::json;
    cfg.output.path = tmp.path("out.json");
    run(cfg);
    const nlohmann::json j = nlohmann::json::parse(read_file(cfg.output.path));
    REQUIRE(j.at("version").get<std::string>() == std::string(version));
    REQUIRE(j.at("params").at("omega").get<double>() == 50.0);
    REQUIRE(j.at("params").at("paper_lambda").get<double>() ==
            Approx(1.0 / std::sqrt(2.0)));
    REQUIRE(j.at("spectrum").at("weight_pairing").get<std::string>() == "paper");
    REQUIRE(j.at("lines").size() == 14);
    for (const auto& line : j.at("lines")) {
        REQUIRE(line.contains("center"));
        REQUIRE(line.contains("weight"));
        REQUIRE(line.contains("source_n"));
        REQUIRE(line.contains("branch"));
    }
    REQUIRE(j.at("samples").size() == 2001);
    REQUIRE(j.at("field").at("kind").get<std::string>() == "binomial");
    REQUIRE(j.contains("peaks"));
}

TEST_CASE("oracle-enabled run writes a comparison report") {
    TempDir tmp;
    RunConfig cfg;
    cfg.params = CanonicalParams{50.0, 0.0, 1.0};
    cfg.field.kind = FieldKind::vacuum;
    cfg.spectrum.gamma = 0.1;
    cfg.oracle.enabled = true;
    cfg.oracle.n_t = 1024;
    cfg.oracle.n_tau = 1024;
    cfg.output.path = tmp.path("vac.csv");
    const RunArtifacts art = run(cfg);
    REQUIRE(art.report.has_value());
    REQUIRE(std::filesystem::exists(art.report_path));
    const nlohmann::json rep = nlohmann::json::parse(read_file(art.report_path));
    REQUIRE(rep.at("hypotheses").contains("paper"));
    REQUIRE(rep.at("hypotheses").contains("derived"));
    REQUIRE(rep.at("hypotheses").at("derived").at("verdict").get<std::string>() == "match");
    // The printed n0 placement parks the vacuum doublet far below the
    // emission band, so the paper hypothesis cannot match the oracle here.
    REQUIRE(rep.at("hypotheses").at("paper").at("verdict").get<std::string>() == "mismatch");
    REQUIRE(rep.at("amplitude_correlation_discrepancy").get<double>() >= 0.0);
}

TEST_CASE("sweep writes one artifact per value plus an index") {
    TempDir tmp;
    RunConfig cfg = preset("fig2");
    cfg.output.path = tmp.path("scan.csv");

    SECTION("delta progression") {
        const SweepArtifacts art = sweep(cfg, "delta", {0.0, 1.0, 2.0});
        REQUIRE(art.run_paths.size() == 3);
        REQUIRE(art.run_paths[0] == tmp.path("scan_delta_0.csv"));
        REQUIRE(art.run_paths[1] == tmp.path("scan_delta_1.csv"));
        REQUIRE(art.run_paths[2] == tmp.path("scan_delta_2.csv"));
        for (const std::string& p : art.run_paths)
            REQUIRE(std::filesystem::exists(p));
        const nlohmann::json index = nlohmann::json::parse(read_file(art.index_path));
        REQUIRE(index.at("axis").get<std::string>() == "delta");
        REQUIRE(index.at("runs").size() == 3);

        // Per-value output equals the equivalent single run.
        RunConfig single = preset("fig2");
        single.params->delta = 2.0;
        single.output.path = tmp.path("single.csv");
        run(single);
        REQUIRE(read_file(tmp.path("scan_delta_2.csv")) == read_file(tmp.path("single.csv")));
    }
    SECTION("eta overlay") {
        const SweepArtifacts art = sweep(cfg, "eta", {0.7, 0.1});
        REQUIRE(art.run_paths.size() == 2);
        REQUIRE(art.run_paths[1] == tmp.path("scan_eta_0.1.csv"));
    }
    SECTION("empty values produce no output") {
        REQUIRE_THROWS_AS(sweep(cfg, "delta", {}), config_error);
        REQUIRE_FALSE(std::filesystem::exists(tmp.path("scan_index.json")));
    }
    SECTION("unknown axis and mismatched field kinds") {
        REQUIRE_THROWS_AS(sweep(cfg, "phase", {0.1}), config_error);
        REQUIRE_THROWS_AS(sweep(cfg, "alpha2", {1.0}), config_error);
        RunConfig coherent_cfg = preset("fig1");
        coherent_cfg.output.path = tmp.path("c.csv");
        REQUIRE_THROWS_AS(sweep(coherent_cfg, "eta", {0.5}), config_error);
        REQUIRE_NOTHROW(sweep(coherent_cfg, "alpha2", {1.0, 10.0}));
    }
}

TEST_CASE("exit codes map the exception hierarchy") {
    REQUIRE(exit_code_for(config_error("x")) == 2);
    REQUIRE(exit_code_for(domain_error("x")) == 3);
    REQUIRE(exit_code_for(cutoff_error("x")) == 3);
    REQUIRE(exit_code_for(resolution_error("x")) == 3);
    REQUIRE(exit_code_for(io_error("x")) == 4);
    const nlohmann::json err = nlohmann::json::parse(error_json(config_error("bad key")));
    REQUIRE(err.at("error").at("type").get<std::string>() == "config");
    REQUIRE(err.at("error").at("message").get<std::string>() == "bad key");
}

TEST_CASE("io failures are reported as io errors") {
    RunConfig cfg = preset("fig2");
    cfg.output.path = "/nonexistent_dir_for_sure/out.csv";
    REQUIRE_THROWS_AS(run(cfg), io_error);
}
