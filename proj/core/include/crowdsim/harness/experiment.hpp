#pragma once

#include "crowdsim/harness/config.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace crowdsim::harness {

// Metric columns are stored as doubles so run rows and aggregate rows
// share one shape; integral columns are rendered without decimals on run
// rows and as 4-decimal means on aggregate rows.
struct EvacRowMetrics {
    double avg_vulnerable = 0.0;
    double avg_normal = 0.0;
    double ratio = 0.0;
    double avg_all = 0.0;
    std::array<double, 4> gate_time{};
    double censored = 0.0;
};

struct StageRowMetrics {
    double frequency = 0.0;
    double aps = 0.0;
    double switch_count = 0.0;
};

// One report row: either a single run (seed set, n_runs = 1), or the
// aggregate over a parameter point (aggregate = true, mean in the metric
// fields, sample standard deviation in the *_sd fields). A failed run
// carries its message in `error` and empty metrics.
struct RunReport {
    Mode mode = Mode::Evac;
    int point_index = 0;
    bool aggregate = false;
    int n_runs = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> run_seed;

    std::string scenario;  // evac echo
    std::string strategy;
    std::string map;       // stage echo
    int pn = 0, brf = 0, pt = 0, st = 0, si = 0;

    std::optional<EvacRowMetrics> evac;
    std::optional<EvacRowMetrics> evac_sd;
    std::optional<StageRowMetrics> stage;
    std::optional<StageRowMetrics> stage_sd;

    std::string error;
};

// Executes the full grid x seed ensemble. Every (point, seed) run uses
// the derived RngStream::mix(seed, point_index) as its simulation seed.
// Failed runs become error rows; the sweep continues. Output is sorted by
// (point_index, seed) with each point's aggregate row last.
std::vector<RunReport> run_experiment(const ExperimentConfig& config);

} // namespace crowdsim::harness
