#include "crowdsim/harness/config.hpp"

#include "crowdsim/errors.hpp"
#include "crowdsim/evac/scenario.hpp"
#include "crowdsim/stage/engine.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace crowdsim::harness {

using nlohmann::json;

const char* to_string(Mode m) { return m == Mode::Evac ? "evac" : "stage"; }

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) fail("unknown key '" + key + "' in " + context);
    }
}

evac::Scenario parse_scenario(const std::string& s) {
    if (s == "S1") return evac::Scenario::S1;
    if (s == "S2") return evac::Scenario::S2;
    if (s == "S3") return evac::Scenario::S3;
    if (s == "S4") return evac::Scenario::S4;
    fail("scenario: expected one of S1..S4, got '" + s + "'");
}

evac::Strategy parse_strategy(const std::string& s) {
    if (s == "RGA") return evac::Strategy::RGA;
    if (s == "VEGA") return evac::Strategy::VEGA;
    if (s == "CGA") return evac::Strategy::CGA;
    fail("strategy: expected RGA, VEGA or CGA, got '" + s + "'");
}

stage::MapId parse_map(const std::string& s) {
    if (s == "A") return stage::MapId::A;
    if (s == "B") return stage::MapId::B;
    if (s == "C") return stage::MapId::C;
    fail("map: expected A, B or C, got '" + s + "'");
}

evac::GateId parse_gate(const std::string& s) {
    if (s == "G1") return evac::GateId::G1;
    if (s == "G2") return evac::GateId::G2;
    if (s == "G3") return evac::GateId::G3;
    if (s == "G4") return evac::GateId::G4;
    fail("designated_gate: expected G1..G4, got '" + s + "'");
}

// Accepts a scalar or an array of scalars; returns the normalized list.
std::vector<json> scalar_or_list(const json& v, const std::string& key) {
    std::vector<json> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e);
        if (out.empty()) fail(key + ": list must be non-empty");
    } else {
        out.push_back(v);
    }
    return out;
}

std::string require_string(const json& v, const std::string& key) {
    if (!v.is_string()) fail(key + ": expected a string");
    return v.get<std::string>();
}

int require_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key + ": expected an integer");
    return v.get<int>();
}

int require_positive_int(const json& v, const std::string& key) {
    const int i = require_int(v, key);
    if (i < 1) fail(key + ": must be positive (got " + std::to_string(i) + ")");
    return i;
}

double require_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key + ": expected a number");
    return v.get<double>();
}

double require_positive(const json& v, const std::string& key) {
    const double d = require_number(v, key);
    if (!(d > 0.0)) fail(key + ": must be > 0");
    return d;
}

std::pair<double, double> require_band(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(key + ": expected [min, max]");
    const double lo = v[0].get<double>();
    const double hi = v[1].get<double>();
    if (!(lo > 0.0) || hi < lo) fail(key + ": requires 0 < min <= max");
    return {lo, hi};
}

void apply_evac_overrides(const json& obj, evac::EvacParams& p) {
    reject_unknown_keys(obj,
                        {"arena_width", "arena_height", "gate_size", "n_vulnerable", "n_normal",
                         "normal_speed", "vulnerable_speed", "personal_radius", "contact_radius",
                         "repulsion_weight", "candidate_directions", "designated_gate",
                         "max_ticks", "placement_retries"},
                        "overrides");
    if (obj.contains("arena_width")) p.arena_width = require_positive(obj["arena_width"], "arena_width");
    if (obj.contains("arena_height")) p.arena_height = require_positive(obj["arena_height"], "arena_height");
    if (obj.contains("gate_size")) p.gate_size = require_positive(obj["gate_size"], "gate_size");
    if (obj.contains("n_vulnerable")) {
        p.n_vulnerable = require_int(obj["n_vulnerable"], "n_vulnerable");
        if (p.n_vulnerable < 0) fail("n_vulnerable: must be >= 0");
    }
    if (obj.contains("n_normal")) {
        p.n_normal = require_int(obj["n_normal"], "n_normal");
        if (p.n_normal < 0) fail("n_normal: must be >= 0");
    }
    if (obj.contains("normal_speed"))
        std::tie(p.normal_speed_min, p.normal_speed_max) =
            require_band(obj["normal_speed"], "normal_speed");
    if (obj.contains("vulnerable_speed"))
        std::tie(p.vulnerable_speed_min, p.vulnerable_speed_max) =
            require_band(obj["vulnerable_speed"], "vulnerable_speed");
    if (obj.contains("personal_radius"))
        p.personal_radius = require_positive(obj["personal_radius"], "personal_radius");
    if (obj.contains("contact_radius"))
        p.contact_radius = require_positive(obj["contact_radius"], "contact_radius");
    if (obj.contains("repulsion_weight")) {
        p.repulsion_weight = require_number(obj["repulsion_weight"], "repulsion_weight");
        if (p.repulsion_weight < 0.0) fail("repulsion_weight: must be >= 0");
    }
    if (obj.contains("candidate_directions")) {
        p.candidate_directions = require_positive_int(obj["candidate_directions"], "candidate_directions");
        if (p.candidate_directions < 4) fail("candidate_directions: must be >= 4");
    }
    if (obj.contains("designated_gate"))
        p.designated_gate = parse_gate(require_string(obj["designated_gate"], "designated_gate"));
    if (obj.contains("max_ticks")) p.max_ticks = require_positive_int(obj["max_ticks"], "max_ticks");
    if (obj.contains("placement_retries"))
        p.placement_retries = require_positive_int(obj["placement_retries"], "placement_retries");

    if (p.n_vulnerable + p.n_normal < 1) fail("n_vulnerable/n_normal: population must be >= 1");
    if (p.arena_width < 2.0 * p.gate_size || p.arena_height < 2.0 * p.gate_size)
        fail("gate_size: corner exit zones must be disjoint (arena must span 2*gate_size)");
    if (p.personal_radius < p.contact_radius)
        fail("personal_radius: must be >= contact_radius");
}

void apply_stage_overrides(const json& obj, stage::StageParams& p) {
    reject_unknown_keys(obj,
                        {"BRT", "trip_fraction", "run_length", "facility_radius",
                         "facility_settle_radius", "settle_radius", "yield_probability",
                         "crowded_fraction", "open_stage"},
                        "overrides");
    if (obj.contains("BRT")) p.brt = require_positive_int(obj["BRT"], "BRT");
    if (obj.contains("trip_fraction")) {
        p.trip_fraction = require_number(obj["trip_fraction"], "trip_fraction");
        if (p.trip_fraction < 0.0 || p.trip_fraction > 1.0)
            fail("trip_fraction: must be within [0, 1]");
    }
    if (obj.contains("run_length")) p.run_length = require_positive_int(obj["run_length"], "run_length");
    if (obj.contains("facility_radius")) {
        p.facility_radius = require_int(obj["facility_radius"], "facility_radius");
        if (p.facility_radius < 0) fail("facility_radius: must be >= 0");
    }
    if (obj.contains("facility_settle_radius")) {
        p.facility_settle_radius =
            require_int(obj["facility_settle_radius"], "facility_settle_radius");
        if (p.facility_settle_radius < 0) fail("facility_settle_radius: must be >= 0");
    }
    if (obj.contains("settle_radius")) {
        p.settle_radius = require_int(obj["settle_radius"], "settle_radius");
        if (p.settle_radius < 0) fail("settle_radius: must be >= 0");
    }
    if (obj.contains("yield_probability")) {
        p.yield_probability = require_number(obj["yield_probability"], "yield_probability");
        if (p.yield_probability < 0.0 || p.yield_probability > 1.0)
            fail("yield_probability: must be within [0, 1]");
    }
    if (obj.contains("crowded_fraction")) {
        p.crowded_fraction = require_number(obj["crowded_fraction"], "crowded_fraction");
        if (!(p.crowded_fraction > 0.0) || p.crowded_fraction > 1.0)
            fail("crowded_fraction: must be within (0, 1]");
    }
    if (obj.contains("open_stage")) {
        const std::string s = require_string(obj["open_stage"], "open_stage");
        if (s == "left")
            p.open_right_first = false;
        else if (s == "right")
            p.open_right_first = true;
        else
            fail("open_stage: expected 'left' or 'right'");
    }
}

std::vector<int> grid_axis(const json& grid, const char* key, int fallback) {
    if (!grid.contains(key)) return {fallback};
    std::vector<int> out;
    for (const auto& v : scalar_or_list(grid[key], key))
        out.push_back(require_positive_int(v, key));
    return out;
}

ExperimentConfig parse_json(const json& root) {
    if (!root.is_object()) fail("config root must be a JSON object");

    ExperimentConfig cfg;

    if (root.contains("schema_version")) {
        cfg.schema_version = require_int(root["schema_version"], "schema_version");
        if (cfg.schema_version != 1) fail("schema_version: only version 1 is supported");
    }
    if (!root.contains("mode")) fail("missing required key 'mode'");
    const std::string mode = require_string(root["mode"], "mode");
    if (mode == "evac")
        cfg.mode = Mode::Evac;
    else if (mode == "stage")
        cfg.mode = Mode::Stage;
    else
        fail("mode: expected 'evac' or 'stage', got '" + mode + "'");

    const std::set<std::string> common = {"schema_version", "mode", "seeds",
                                          "output", "trace", "trace_dir"};
    std::set<std::string> allowed = common;
    if (cfg.mode == Mode::Evac) {
        allowed.insert({"scenario", "strategy", "overrides"});
    } else {
        allowed.insert({"map", "grid", "overrides"});
    }
    reject_unknown_keys(root, allowed, std::string("a ") + to_string(cfg.mode) + " config");

    if (!root.contains("seeds")) fail("missing required key 'seeds'");
    if (!root["seeds"].is_array() || root["seeds"].empty())
        fail("seeds: expected a non-empty array");
    for (const auto& s : root["seeds"]) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
            fail("seeds: entries must be non-negative integers");
        cfg.seeds.push_back(s.get<std::uint64_t>());
    }

    if (root.contains("output")) cfg.output = require_string(root["output"], "output");
    if (root.contains("trace")) {
        if (!root["trace"].is_boolean()) fail("trace: expected a boolean");
        cfg.trace = root["trace"].get<bool>();
    }
    if (root.contains("trace_dir")) cfg.trace_dir = require_string(root["trace_dir"], "trace_dir");

    if (cfg.mode == Mode::Evac) {
        if (root.contains("scenario"))
            for (const auto& v : scalar_or_list(root["scenario"], "scenario"))
                cfg.scenarios.push_back(parse_scenario(require_string(v, "scenario")));
        else
            cfg.scenarios = {evac::Scenario::S1, evac::Scenario::S2, evac::Scenario::S3,
                             evac::Scenario::S4};
        if (root.contains("strategy"))
            for (const auto& v : scalar_or_list(root["strategy"], "strategy"))
                cfg.strategies.push_back(parse_strategy(require_string(v, "strategy")));
        else
            cfg.strategies = {evac::Strategy::RGA, evac::Strategy::VEGA, evac::Strategy::CGA};
        if (root.contains("overrides")) {
            if (!root["overrides"].is_object()) fail("overrides: expected an object");
            apply_evac_overrides(root["overrides"], cfg.evac_params);
        }
    } else {
        if (!root.contains("map")) fail("missing required key 'map' (stage mode)");
        for (const auto& v : scalar_or_list(root["map"], "map"))
            cfg.maps.push_back(parse_map(require_string(v, "map")));
        json grid = json::object();
        if (root.contains("grid")) {
            if (!root["grid"].is_object()) fail("grid: expected an object");
            grid = root["grid"];
            reject_unknown_keys(grid, {"PN", "BRF", "PT", "ST", "SI"}, "grid");
        }
        cfg.pn = grid_axis(grid, "PN", cfg.stage_params.pn);
        cfg.brf = grid_axis(grid, "BRF", cfg.stage_params.brf);
        cfg.pt = grid_axis(grid, "PT", cfg.stage_params.pt);
        cfg.st = grid_axis(grid, "ST", cfg.stage_params.st);
        cfg.si = grid_axis(grid, "SI", cfg.stage_params.si);
        if (root.contains("overrides")) {
            if (!root["overrides"].is_object()) fail("overrides: expected an object");
            apply_stage_overrides(root["overrides"], cfg.stage_params);
        }
    }

    return cfg;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_json(root);
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json root;
    root["schema_version"] = cfg.schema_version;
    root["mode"] = to_string(cfg.mode);
    root["seeds"] = cfg.seeds;
    root["output"] = cfg.output;
    root["trace"] = cfg.trace;
    root["trace_dir"] = cfg.trace_dir;

    if (cfg.mode == Mode::Evac) {
        json scenarios = json::array();
        for (auto s : cfg.scenarios) scenarios.push_back(evac::to_string(s));
        root["scenario"] = scenarios;
        json strategies = json::array();
        for (auto s : cfg.strategies) strategies.push_back(evac::to_string(s));
        root["strategy"] = strategies;
        const auto& p = cfg.evac_params;
        root["overrides"] = {{"arena_width", p.arena_width},
                             {"arena_height", p.arena_height},
                             {"gate_size", p.gate_size},
                             {"n_vulnerable", p.n_vulnerable},
                             {"n_normal", p.n_normal},
                             {"normal_speed", {p.normal_speed_min, p.normal_speed_max}},
                             {"vulnerable_speed", {p.vulnerable_speed_min, p.vulnerable_speed_max}},
                             {"personal_radius", p.personal_radius},
                             {"contact_radius", p.contact_radius},
                             {"repulsion_weight", p.repulsion_weight},
                             {"candidate_directions", p.candidate_directions},
                             {"designated_gate", evac::to_string(p.designated_gate)},
                             {"max_ticks", p.max_ticks},
                             {"placement_retries", p.placement_retries}};
    } else {
        json maps = json::array();
        for (auto m : cfg.maps) maps.push_back(stage::to_string(m));
        root["map"] = maps;
        root["grid"] = {{"PN", cfg.pn}, {"BRF", cfg.brf}, {"PT", cfg.pt},
                        {"ST", cfg.st}, {"SI", cfg.si}};
        const auto& p = cfg.stage_params;
        root["overrides"] = {{"BRT", p.brt},
                             {"trip_fraction", p.trip_fraction},
                             {"run_length", p.run_length},
                             {"facility_radius", p.facility_radius},
                             {"facility_settle_radius", p.facility_settle_radius},
                             {"settle_radius", p.settle_radius},
                             {"yield_probability", p.yield_probability},
                             {"crowded_fraction", p.crowded_fraction},
                             {"open_stage", p.open_right_first ? "right" : "left"}};
    }
    return root.dump(2) + "\n";
}

} // namespace crowdsim::harness
