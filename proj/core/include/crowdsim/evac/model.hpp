#pragma once

#include "crowdsim/geometry.hpp"
#include "crowdsim/occupancy.hpp"
#include "crowdsim/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crowdsim::evac {

// The evacuation arena uses screen orientation: x grows rightward, y grows
// downward, so (0,0) is the top-left corner. Gates sit one per corner:
//   G1 = top-left (0,0)        G2 = top-right (W,0)
//   G3 = bottom-left (0,H)     G4 = bottom-right (W,H)
enum class GateId : int { G1 = 0, G2 = 1, G3 = 2, G4 = 3 };

enum class AgentKind { Normal, Vulnerable };
enum class Strategy { RGA, VEGA, CGA };
enum class Scenario { S1, S2, S3, S4 };

const char* to_string(GateId g);
const char* to_string(AgentKind k);
const char* to_string(Strategy s);
const char* to_string(Scenario s);

struct Gate {
    GateId id;
    Rect region;  // exit zone; an agent whose position enters it has left
    Vec2 anchor;  // corner point used for distance ranking
};

// Tunables of the evacuation simulator. Lengths are meters; speeds are
// meters per timestep (one timestep represents 0.48 s).
struct EvacParams {
    double arena_width = 100.0;
    double arena_height = 100.0;
    double gate_size = 5.0;  // side of the square exit zone in each corner

    int n_vulnerable = 340;
    int n_normal = 1023;

    // Per-agent speed is drawn uniformly from the band for its kind.
    double normal_speed_min = 1.0;
    double normal_speed_max = 1.3;
    double vulnerable_speed_min = 0.5;
    double vulnerable_speed_max = 0.65;

    double personal_radius = 1.2;   // social-distance penalty radius
    double contact_radius = 0.4;    // hard non-overlap distance
    double repulsion_weight = 2.0;  // weight of the personal-space penalty
    int candidate_directions = 16;  // ring candidates per step

    GateId designated_gate = GateId::G1;  // vulnerable-exclusive gate (VEGA)

    int max_ticks = 2000;        // agents still inside are censored here
    int placement_retries = 1000;

    bool operator==(const EvacParams&) const = default;
};

struct EvacAgent {
    int id = 0;
    AgentKind kind = AgentKind::Normal;
    Vec2 pos;
    double speed = 1.0;
    GateId gate = GateId::G1;
    std::optional<int> evac_time;  // tick of exit; set exactly once
    bool censored = false;         // still inside when the run hit max_ticks
};

struct EvacMetrics {
    double avg_vulnerable = 0.0;
    double avg_normal = 0.0;
    double ratio = 0.0;  // avg_normal / avg_vulnerable (fairness index)
    double avg_all = 0.0;
    std::array<int, 4> gate_time{};  // last exit tick per gate; 0 if unused
    int censored = 0;
};

// One row per still-inside agent per tick, plus a final row on the exit
// tick with evacuated=true.
struct EvacTraceRow {
    int tick;
    int agent;
    double x;
    double y;
    bool evacuated;
};

struct EvacWorld {
    EvacParams params;
    Rect bounds;
    std::array<Gate, 4> gates;
    std::vector<EvacAgent> agents;  // index == agent id
    int tick = 0;
    RngStream rng;
    OccupancyIndex index;  // active (not yet evacuated) agents only
    int remaining = 0;

    EvacWorld(const EvacParams& p, std::vector<EvacAgent> initial_agents, RngStream rng_in);

    const Gate& gate(GateId g) const { return gates[static_cast<std::size_t>(g)]; }
};

std::array<Gate, 4> make_gates(const EvacParams& params);

} // namespace crowdsim::evac
