#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sipgrey/metrics.hpp"
#include "sipgrey/scenario.hpp"
#include "sipgrey/simulator.hpp"

namespace fs = std::filesystem;
using namespace sipgrey;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("SIPGREY_OUT_DIR"); env && *env) return env;
    return "out";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_run(const std::string& target, std::optional<std::uint64_t> seed_override,
            std::string out_dir) {
    Scenario sc = is_preset(target) ? preset_scenario(target) : load_scenario(target);
    validate_scenario(sc);

    if (out_dir.empty()) out_dir = sc.outputs_dir.empty() ? default_out_dir() : sc.outputs_dir;
    std::vector<std::uint64_t> seeds =
        seed_override ? std::vector<std::uint64_t>{*seed_override} : sc.seeds;

    for (std::uint64_t seed : seeds) {
        RunLog log = run_scenario(sc, seed);
        RunReport report = analyze(log);

        fs::path dir = fs::path(out_dir) / sc.name / ("seed-" + std::to_string(seed));
        fs::create_directories(dir);
        write_file(dir / "events.csv", events_csv(log));
        write_file(dir / "rules.csv", rules_csv(log));
        write_file(dir / "timeline.csv", timeline_csv(report));
        write_file(dir / "summary.csv", summary_csv(report));
        write_file(dir / "summary.txt", summary_text(report));

        std::fputs(summary_text(report).c_str(), stdout);
        std::printf("wrote %s\n\n", dir.string().c_str());
    }
    return 0;
}

int cmd_presets(const std::string& dump) {
    if (!dump.empty()) {
        std::fputs(serialize_scenario(preset_scenario(dump)).c_str(), stdout);
        return 0;
    }
    for (const auto& info : preset_catalog())
        std::printf("%-18s %s\n", info.name.c_str(), info.summary.c_str());
    return 0;
}

int cmd_calibrate() {
    Calibration cal = calibrate(reference_capacity_measurements());
    const LatencyModel& m = cal.model;
    std::printf("per rule update:    %.9f s + %.9f s per installed rule\n", m.per_rule_base_s,
                m.per_existing_rule_s);
    std::printf("per batch push:     %.9f s + %.9f s per installed rule\n", m.per_batch_base_s,
                m.per_batch_per_existing_rule_s);
    std::printf("\n%-32s %10s %10s\n", "measurement", "observed", "predicted");
    for (const auto& r : cal.residuals)
        std::printf("%-32s %8.1f/s %8.1f/s\n", r.label.c_str(), r.observed_rps, r.predicted_rps);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greylisting pinhole firewall sandbox"};
    app.require_subcommand(1);

    std::string target, out_dir, dump;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "simulate a scenario file or preset");
    run->add_option("scenario", target, "scenario file or preset name")->required();
    auto* seed_opt = run->add_option("--seed", seed, "run only this seed");
    run->add_option("--out", out_dir, "output directory (default $SIPGREY_OUT_DIR or ./out)");

    auto* presets = app.add_subcommand("presets", "list built-in scenarios");
    presets->add_option("--dump", dump, "print one preset as scenario text");

    auto* cal = app.add_subcommand("calibrate", "fit the rule-apply cost model and show residuals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed())
            return cmd_run(target,
                           seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                           out_dir);
        if (presets->parsed()) return cmd_presets(dump);
        if (cal->parsed()) return cmd_calibrate();
    } catch (const ScenarioError& e) {
        if (e.line > 0)
            std::fprintf(stderr, "sipgrey: line %d: %s\n", e.line, e.what());
        else
            std::fprintf(stderr, "sipgrey: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sipgrey: %s\n", e.what());
        return 1;
    }
    return 0;
}
