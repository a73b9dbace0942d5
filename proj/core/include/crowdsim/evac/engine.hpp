#pragma once

#include "crowdsim/evac/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace crowdsim::evac {

// Candidate step targets for one agent: its current position first, then
// candidate_directions points on the circle of radius speed, at equal
// angles starting from the bearing toward the assigned gate anchor.
// Points outside the arena are removed. Order is fixed, so utility ties
// resolve deterministically by list position.
std::vector<Vec2> candidate_positions(const EvacWorld& world, const EvacAgent& agent);

// Social-distance utility of standing at `candidate`:
//   -dist(candidate, gate anchor)
//   - sum over neighbors j within personal_radius of w * (personal_radius - d_j)
// Any candidate within contact_radius of another agent is infeasible and
// returns nullopt. Higher is better.
std::optional<double> position_utility(const EvacWorld& world, const EvacAgent& agent,
                                       Vec2 candidate);

// Advances the world one timestep. Agents are processed in a seeded
// shuffled order; each moves to its best feasible candidate (an agent with
// no feasible candidate stays put) and is removed with evac_time = tick
// when its position enters its gate region.
void evac_step(EvacWorld& world);

// avg_normal / avg_vulnerable. Throws MetricError when avg_vulnerable <= 0.
double fairness_index(double avg_vulnerable, double avg_normal);

// Metrics over a finished run. Throws MetricError if either group is
// empty (the fairness index is undefined). Censored agents count toward
// the averages at max_ticks but not toward gate times.
EvacMetrics compute_metrics(const EvacWorld& world);

using EvacTraceSink = std::function<void(const EvacTraceRow&)>;

// Full run: generate_scenario + assign_gates + steps until everyone is out
// or params.max_ticks is reached (stragglers are censored at max_ticks).
EvacMetrics run_evacuation(Scenario scenario, Strategy strategy, const EvacParams& params,
                           std::uint64_t seed, const EvacTraceSink& sink = {});

} // namespace crowdsim::evac
