#pragma once

#include "crowdsim/evac/model.hpp"
#include "crowdsim/stage/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crowdsim::harness {

enum class Mode { Evac, Stage };

const char* to_string(Mode m);

// One experiment: a parameter grid swept over a seed ensemble. Evac mode
// sweeps scenario x strategy; stage mode sweeps map x PN x BRF x PT x ST
// x SI. The embedded param structs carry every remaining default, which
// the config's "overrides" object may replace.
struct ExperimentConfig {
    int schema_version = 1;
    Mode mode = Mode::Evac;
    std::vector<std::uint64_t> seeds;
    std::string output = "report.csv";
    bool trace = false;
    std::string trace_dir = "traces";

    // evac axes
    std::vector<evac::Scenario> scenarios;
    std::vector<evac::Strategy> strategies;
    evac::EvacParams evac_params;

    // stage axes
    std::vector<stage::MapId> maps;
    std::vector<int> pn;
    std::vector<int> brf;
    std::vector<int> pt;
    std::vector<int> st;
    std::vector<int> si;
    stage::StageParams stage_params;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses and fully validates a config file. Unknown keys are rejected and
// every range error names the offending key. Throws ConfigError.
ExperimentConfig parse_config(const std::string& path);

// Same, from an in-memory JSON document.
ExperimentConfig parse_config_text(const std::string& text);

// Canonical JSON for a validated config; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

} // namespace crowdsim::harness
