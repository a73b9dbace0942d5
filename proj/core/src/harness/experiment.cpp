#include "crowdsim/harness/experiment.hpp"

#include "crowdsim/errors.hpp"
#include "crowdsim/evac/engine.hpp"
#include "crowdsim/stage/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace crowdsim::harness {

namespace {

struct EvacPoint {
    evac::Scenario scenario;
    evac::Strategy strategy;
};

struct StagePoint {
    stage::StageParams params;  // fully resolved for this point
};

std::string trace_path(const ExperimentConfig& cfg, int point, std::uint64_t seed) {
    return (std::filesystem::path(cfg.trace_dir) /
            (std::string(to_string(cfg.mode)) + "_p" + std::to_string(point) + "_s" +
             std::to_string(seed) + ".jsonl"))
        .string();
}

RunReport evac_run_row(const ExperimentConfig& cfg, const EvacPoint& pt, int point_index,
                       std::uint64_t seed) {
    RunReport row;
    row.mode = Mode::Evac;
    row.point_index = point_index;
    row.seed = seed;
    row.run_seed = RngStream::mix(seed, static_cast<std::uint64_t>(point_index));
    row.scenario = evac::to_string(pt.scenario);
    row.strategy = evac::to_string(pt.strategy);
    try {
        evac::EvacTraceSink sink;
        std::ofstream trace_file;
        if (cfg.trace) {
            std::filesystem::create_directories(cfg.trace_dir);
            trace_file.open(trace_path(cfg, point_index, seed), std::ios::binary);
            if (!trace_file) throw Error("cannot open trace file in '" + cfg.trace_dir + "'");
            sink = [&trace_file](const evac::EvacTraceRow& r) {
                nlohmann::json j{{"tick", r.tick}, {"agent", r.agent}, {"x", r.x},
                                 {"y", r.y},       {"evacuated", r.evacuated}};
                trace_file << j.dump() << '\n';
            };
        }
        const auto m = evac::run_evacuation(pt.scenario, pt.strategy, cfg.evac_params,
                                            *row.run_seed, sink);
        EvacRowMetrics em;
        em.avg_vulnerable = m.avg_vulnerable;
        em.avg_normal = m.avg_normal;
        em.ratio = m.ratio;
        em.avg_all = m.avg_all;
        for (std::size_t g = 0; g < 4; ++g) em.gate_time[g] = m.gate_time[g];
        em.censored = m.censored;
        row.evac = em;
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

RunReport stage_run_row(const ExperimentConfig& cfg, const StagePoint& pt, int point_index,
                        std::uint64_t seed) {
    RunReport row;
    row.mode = Mode::Stage;
    row.point_index = point_index;
    row.seed = seed;
    row.run_seed = RngStream::mix(seed, static_cast<std::uint64_t>(point_index));
    row.map = stage::to_string(pt.params.map);
    row.pn = pt.params.pn;
    row.brf = pt.params.brf;
    row.pt = pt.params.pt;
    row.st = pt.params.st;
    row.si = pt.params.si;
    try {
        stage::StageTraceSink sink;
        std::ofstream trace_file;
        if (cfg.trace) {
            std::filesystem::create_directories(cfg.trace_dir);
            trace_file.open(trace_path(cfg, point_index, seed), std::ios::binary);
            if (!trace_file) throw Error("cannot open trace file in '" + cfg.trace_dir + "'");
            sink = [&trace_file](const stage::StageTickTrace& t) {
                nlohmann::json subareas = nlohmann::json::array();
                for (const auto& s : t.subareas)
                    subareas.push_back({s.occupancy, s.crowded ? 1 : 0, s.crowded_since});
                nlohmann::json j{{"tick", t.tick},
                                 {"open_stage", t.open_stage == 0 ? "left" : "right"},
                                 {"panic", t.panic_count},
                                 {"surge", t.surge_count},
                                 {"switch", t.switched},
                                 {"subareas", subareas}};
                trace_file << j.dump() << '\n';
            };
        }
        const auto m = stage::run_stage_sim(pt.params, *row.run_seed, sink);
        row.stage = StageRowMetrics{m.frequency, m.aps, static_cast<double>(m.switch_count)};
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

template <class Metrics, class Get>
double sample_sd(const std::vector<Metrics>& xs, Get get, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (const auto& x : xs) {
        const double d = get(x) - mean;
        acc += d * d;
    }
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

template <class Metrics, class Get>
double mean_of(const std::vector<Metrics>& xs, Get get) {
    double acc = 0.0;
    for (const auto& x : xs) acc += get(x);
    return acc / static_cast<double>(xs.size());
}

// Aggregate row over one parameter point; echoes are copied from the
// first member row. Only successful runs contribute.
RunReport aggregate_row(const std::vector<RunReport>& runs) {
    RunReport agg = runs.front();
    agg.seed.reset();
    agg.run_seed.reset();
    agg.aggregate = true;
    agg.error.clear();
    agg.evac.reset();
    agg.stage.reset();

    if (agg.mode == Mode::Evac) {
        std::vector<EvacRowMetrics> ok;
        for (const auto& r : runs)
            if (r.evac) ok.push_back(*r.evac);
        agg.n_runs = static_cast<int>(ok.size());
        if (ok.empty()) {
            agg.error = "all runs failed";
            return agg;
        }
        EvacRowMetrics mean, sd;
        auto fill = [&](double EvacRowMetrics::*field) {
            const auto get = [field](const EvacRowMetrics& m) { return m.*field; };
            mean.*field = mean_of(ok, get);
            sd.*field = sample_sd(ok, get, mean.*field);
        };
        fill(&EvacRowMetrics::avg_vulnerable);
        fill(&EvacRowMetrics::avg_normal);
        fill(&EvacRowMetrics::ratio);
        fill(&EvacRowMetrics::avg_all);
        fill(&EvacRowMetrics::censored);
        for (std::size_t g = 0; g < 4; ++g) {
            const auto get = [g](const EvacRowMetrics& m) { return m.gate_time[g]; };
            mean.gate_time[g] = mean_of(ok, get);
            sd.gate_time[g] = sample_sd(ok, get, mean.gate_time[g]);
        }
        agg.evac = mean;
        agg.evac_sd = sd;
    } else {
        std::vector<StageRowMetrics> ok;
        for (const auto& r : runs)
            if (r.stage) ok.push_back(*r.stage);
        agg.n_runs = static_cast<int>(ok.size());
        if (ok.empty()) {
            agg.error = "all runs failed";
            return agg;
        }
        StageRowMetrics mean, sd;
        auto fill = [&](double StageRowMetrics::*field) {
            const auto get = [field](const StageRowMetrics& m) { return m.*field; };
            mean.*field = mean_of(ok, get);
            sd.*field = sample_sd(ok, get, mean.*field);
        };
        fill(&StageRowMetrics::frequency);
        fill(&StageRowMetrics::aps);
        fill(&StageRowMetrics::switch_count);
        agg.stage = mean;
        agg.stage_sd = sd;
    }
    return agg;
}

} // namespace

std::vector<RunReport> run_experiment(const ExperimentConfig& config) {
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());

    std::vector<RunReport> out;
    int point_index = 0;

    if (config.mode == Mode::Evac) {
        for (const auto scenario : config.scenarios) {
            for (const auto strategy : config.strategies) {
                const EvacPoint pt{scenario, strategy};
                std::vector<RunReport> runs;
                runs.reserve(seeds.size());
                for (const auto seed : seeds)
                    runs.push_back(evac_run_row(config, pt, point_index, seed));
                const RunReport agg = aggregate_row(runs);
                out.insert(out.end(), runs.begin(), runs.end());
                out.push_back(agg);
                ++point_index;
            }
        }
    } else {
        for (const auto map : config.maps) {
            for (const int pn : config.pn)
                for (const int brf : config.brf)
                    for (const int pt_v : config.pt)
                        for (const int st : config.st)
                            for (const int si : config.si) {
                                StagePoint pt;
                                pt.params = config.stage_params;
                                pt.params.map = map;
                                pt.params.pn = pn;
                                pt.params.brf = brf;
                                pt.params.pt = pt_v;
                                pt.params.st = st;
                                pt.params.si = si;
                                std::vector<RunReport> runs;
                                runs.reserve(seeds.size());
                                for (const auto seed : seeds)
                                    runs.push_back(stage_run_row(config, pt, point_index, seed));
                                const RunReport agg = aggregate_row(runs);
                                out.insert(out.end(), runs.begin(), runs.end());
                                out.push_back(agg);
                                ++point_index;
                            }
        }
    }
    return out;
}

} // namespace crowdsim::harness
