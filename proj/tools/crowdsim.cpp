// crowdsim — seeded crowd-management experiments from JSON configs.
//
//   crowdsim evac run --config cfg.json [--trace DIR]
//   crowdsim stage run --config cfg.json [--trace DIR]
//   crowdsim sweep --config cfg.json
//   crowdsim validate --config cfg.json
//
// Exit codes: 0 success, 1 config error, 2 runtime error.

#include "crowdsim/errors.hpp"
#include "crowdsim/harness/config.hpp"
#include "crowdsim/harness/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace crowdsim;
using namespace crowdsim::harness;

int count_points(const ExperimentConfig& cfg) {
    if (cfg.mode == Mode::Evac)
        return static_cast<int>(cfg.scenarios.size() * cfg.strategies.size());
    return static_cast<int>(cfg.maps.size() * cfg.pn.size() * cfg.brf.size() * cfg.pt.size() *
                            cfg.st.size() * cfg.si.size());
}

int execute(const std::string& config_path, std::optional<Mode> expected_mode,
            const std::string& trace_dir, bool validate_only) {
    ExperimentConfig cfg = parse_config(config_path);
    if (expected_mode && cfg.mode != *expected_mode)
        throw ConfigError(std::string("config mode is '") + to_string(cfg.mode) +
                          "' but the subcommand expects '" + to_string(*expected_mode) + "'");
    if (!trace_dir.empty()) {
        cfg.trace = true;
        cfg.trace_dir = trace_dir;
    }

    const int points = count_points(cfg);
    if (validate_only) {
        std::printf("config ok: mode=%s, points=%d, seeds=%zu, runs=%zu\n", to_string(cfg.mode),
                    points, cfg.seeds.size(), cfg.seeds.size() * static_cast<std::size_t>(points));
        return 0;
    }

    const auto rows = run_experiment(cfg);
    write_report(rows, cfg.output);

    int errors = 0;
    for (const auto& r : rows)
        if (!r.aggregate && !r.error.empty()) ++errors;
    std::printf("wrote %zu rows (%d points x %zu seeds, %d failed runs) to %s\n", rows.size(),
                points, cfg.seeds.size(), errors, cfg.output.c_str());
    if (cfg.trace) std::printf("traces in %s\n", cfg.trace_dir.c_str());
    return errors == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowd-management simulation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string trace_dir;

    auto add_run = [&](CLI::App* parent, const char* name, const char* help) {
        CLI::App* cmd = parent->add_subcommand(name, help);
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--trace", trace_dir, "write per-run JSONL traces into this directory");
        return cmd;
    };

    CLI::App* evac = app.add_subcommand("evac", "evacuation simulator");
    evac->require_subcommand(1);
    CLI::App* evac_run = add_run(evac, "run", "run an evac experiment");

    CLI::App* stage = app.add_subcommand("stage", "stage-event simulator");
    stage->require_subcommand(1);
    CLI::App* stage_run = add_run(stage, "run", "run a stage experiment");

    CLI::App* sweep = app.add_subcommand("sweep", "run any configured sweep");
    sweep->add_option("--config", config_path, "experiment config (JSON)")->required();

    CLI::App* validate = app.add_subcommand("validate", "validate a config and exit");
    validate->add_option("--config", config_path, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (evac_run->parsed()) return execute(config_path, Mode::Evac, trace_dir, false);
        if (stage_run->parsed()) return execute(config_path, Mode::Stage, trace_dir, false);
        if (sweep->parsed()) return execute(config_path, std::nullopt, "", false);
        if (validate->parsed()) return execute(config_path, std::nullopt, "", true);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
