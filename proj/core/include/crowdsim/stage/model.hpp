#pragma once

#include "crowdsim/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace crowdsim::stage {

// The stage world is a 51x51 patch grid with the origin (0,0) at the
// bottom-left, each patch holding at most one agent. It is partitioned
// into 10x10 subarea tiles: nine 5-patch tiles plus one 6-patch tile per
// axis, so interior subareas hold 25 patches and the partition is exact.
inline constexpr int kGridSize = 51;
inline constexpr int kSubareaTiles = 10;
inline constexpr int kSubareaStride = 5;

enum class MapId { A, B, C };
enum class Activity { ToStage, AtStage, ToFacility, AtFacility, Hesitating };
enum class Destination { LeftStage, RightStage, Bar, Restroom };

const char* to_string(MapId m);
const char* to_string(Activity a);
const char* to_string(Destination d);

inline bool is_stage(Destination d) {
    return d == Destination::LeftStage || d == Destination::RightStage;
}
inline bool is_facility(Destination d) {
    return d == Destination::Bar || d == Destination::Restroom;
}
// 0 = left stage, 1 = right stage.
inline int stage_index(Destination d) { return d == Destination::RightStage ? 1 : 0; }
inline Destination stage_destination(int idx) {
    return idx == 1 ? Destination::RightStage : Destination::LeftStage;
}

struct GridPoint {
    int x = 0;
    int y = 0;
    bool operator==(const GridPoint&) const = default;
};

// Inclusive integer rectangle of patches.
struct GridRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    GridPoint clamp(GridPoint p) const {
        return {p.x < x0 ? x0 : (p.x > x1 ? x1 : p.x), p.y < y0 ? y0 : (p.y > y1 ? y1 : p.y)};
    }
    int patch_count() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
    bool operator==(const GridRect&) const = default;
};

// Simulation parameters. Times are in timesteps, distances in patches.
struct StageParams {
    int pn = 500;              // total agents (PN)
    int brf = 50;              // ticks between trip-initiation rounds (BRF)
    int brt = 50;              // dwell duration of one bar/restroom trip (BRT)
    double trip_fraction = 0.4;
    int pt = 10;               // panic threshold (PT)
    int st = 30;               // surge threshold (ST)
    int si = 10;               // switch index (SI)
    int run_length = 5000;
    MapId map = MapId::A;
    int facility_radius = 3;         // a trip completes within this distance of the facility
    int facility_settle_radius = 11; // a blocked tripper this close has joined the queue
    int settle_radius = 14;          // a blocked stage-goer this close joins the audience
    double yield_probability = 0.6; // chance per attempt that an idle neighbor gives way
    double push_probability = 0.0;  // chance per attempt of pushing past another mover
    int giveup_margin = 20;         // blocked this far beyond the threshold, an agent quits trying
    double crowded_fraction = 0.70;
    bool open_right_first = true;

    bool operator==(const StageParams&) const = default;
};

struct StageAgent {
    int id = 0;
    int x = 0;
    int y = 0;
    int speed = 1;            // patches per tick, half the crowd has 2
    int comfort_distance = 1; // stops this close to the open stage
    int hesitation = 1;       // delay before chasing a switched stage
    Activity activity = Activity::ToStage;
    Destination destination = Destination::RightStage;
    // Personal viewing spot near the target stage; redrawn per journey so
    // approach bearings fan out instead of bundling into one lane.
    int spot_x = 0;
    int spot_y = 0;
    int block_stage = 0;      // consecutive blocked ticks en route to a stage
    int block_facility = 0;   // consecutive blocked ticks en route to bar/restroom
    bool panic = false;
    bool surge = false;
    int dwell_remaining = 0;
    int hesitation_remaining = 0;
};

struct Subarea {
    GridRect cells;
    int patches = 0;
    int occupied = 0;
    bool has_flagged = false;  // holds an agent in panic or surge this tick
    bool crowded = false;
    int crowded_since = 0;     // consecutive crowded ticks
};

struct StageMetrics {
    double frequency = 0.0;  // switches per timestep (F)
    double aps = 0.0;        // mean panicking-or-surging agents per timestep
    int switch_count = 0;
    std::vector<int> panic_timeline;
    std::vector<int> surge_timeline;
    std::vector<int> switch_log;  // ticks at which the stage switched
};

struct SubareaTraceRow {
    double occupancy;  // occupied / patches
    bool crowded;
    int crowded_since;
};

struct StageTickTrace {
    int tick = 0;
    int open_stage = 1;  // stage open while this tick ran
    int panic_count = 0;
    int surge_count = 0;
    bool switched = false;
    std::vector<SubareaTraceRow> subareas;
};

struct StageWorld {
    StageParams params;
    std::array<GridRect, 2> stage_rect;  // [0] left, [1] right (by center x)
    int open_stage = 1;
    GridPoint bar{25, 2};        // lower-edge midpoint
    GridPoint restroom{25, 48};  // upper-edge midpoint
    std::vector<StageAgent> agents;  // index == agent id
    std::vector<int> grid;           // kEmpty, kBlocked or an agent id
    std::vector<Subarea> subareas;   // kSubareaTiles^2, row-major from bottom-left
    int tick = 0;
    RngStream rng;
    std::vector<int> switch_log;

    // Trip-initiation tallies for statistical checks.
    long long trip_candidates = 0;
    long long trip_starts = 0;

    static constexpr int kEmpty = -1;
    static constexpr int kBlocked = -2;

    explicit StageWorld(RngStream rng_in) : rng(rng_in) {}

    static int cell(int x, int y) { return x + kGridSize * y; }
    static bool in_grid(int x, int y) {
        return x >= 0 && x < kGridSize && y >= 0 && y < kGridSize;
    }
    int at(int x, int y) const { return grid[static_cast<std::size_t>(cell(x, y))]; }
    bool is_free(int x, int y) const { return in_grid(x, y) && at(x, y) == kEmpty; }
    static int subarea_index_of(int x, int y) {
        const int sx = std::min(x / kSubareaStride, kSubareaTiles - 1);
        const int sy = std::min(y / kSubareaStride, kSubareaTiles - 1);
        return sx + kSubareaTiles * sy;
    }
};

} // namespace crowdsim::stage
