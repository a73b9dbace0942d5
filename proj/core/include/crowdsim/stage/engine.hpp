#pragma once

#include "crowdsim/stage/model.hpp"

#include <cstdint>
#include <functional>

namespace crowdsim::stage {

// Builds the initial world: stages placed per map layout, agents on
// distinct free patches drawn uniformly, speed 2 for half the agents
// (rounded down), comfort distance uniform in [1,10], hesitation uniform
// in [1,20], right stage open first (configurable). Throws PlacementError
// when pn exceeds the number of free patches.
StageWorld build_stage_world(const StageParams& params, std::uint64_t seed);

// Squared Euclidean distance from patch (x,y) to the agent's current
// destination (nearest patch of the stage rectangle, or the facility patch).
// Arrival, settling and the AtStage test all use this; walking aims at the
// agent's personal spot instead.
long long dest_dist_sq(const StageWorld& world, Destination dest, int x, int y);

// Draws the agent's personal viewing spot: a uniform point on the target
// stage's perimeter pushed outward by the agent's comfort distance.
void assign_stage_spot(StageWorld& world, StageAgent& agent);

// Per-tick state-machine update for one agent: hesitation and dwell
// countdowns, arrival transitions (within comfort_distance of the target
// stage -> AtStage; within facility_radius of the facility -> AtFacility),
// and trip initiation every brf ticks with probability trip_fraction.
void plan_agent_intent(StageWorld& world, StageAgent& agent);

// Movement for one tick: agents in seeded shuffled order take up to
// `speed` single-patch moves, each to the free 8-neighbor minimizing the
// distance to the destination (ties by N,NE,E,SE,S,SW,W,NW). An agent
// whose destination is unreached and that makes no distance-decreasing
// move this tick is blocked: its relevant block counter increments; any
// successful move resets that counter.
void stage_step(StageWorld& world);

// Flags and subarea states for the current tick. Returns (panic count,
// surge count). A subarea is crowded when occupied/patches exceeds
// crowded_fraction and it holds at least one flagged agent; its
// crowded_since timer increments while crowded and resets otherwise.
std::pair<int, int> detect_states(StageWorld& world);

// At most one switch per tick: the first subarea (ascending index) with
// crowded_since > si and at least two crowded 4-connected neighbors flips
// the open stage, logs the tick, resets every crowded_since timer, and
// sends every agent targeting the closed stage into hesitation.
bool switch_controller(StageWorld& world);

using StageTraceSink = std::function<void(const StageTickTrace&)>;

// Full run of run_length ticks of (intent -> step -> detect -> controller).
StageMetrics run_stage_sim(const StageParams& params, std::uint64_t seed,
                           const StageTraceSink& sink = {});

// Metric arithmetic, exposed for reuse by reports and tests.
double switch_frequency(int switch_count, int run_length);
double average_panic_surge(long long flagged_total, int run_length);

} // namespace crowdsim::stage
