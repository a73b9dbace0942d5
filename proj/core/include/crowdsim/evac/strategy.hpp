#pragma once

#include "crowdsim/evac/model.hpp"

namespace crowdsim::evac {

// Gate nearest to pos by anchor distance; ties broken by lowest gate id.
GateId nearest_gate(const EvacWorld& world, Vec2 pos);

// Nearest gate with one gate excluded (the vulnerable-exclusive gate under
// VEGA is not available to normal agents).
GateId nearest_gate_excluding(const EvacWorld& world, Vec2 pos, GateId excluded);

// Assigns every agent its evacuation gate.
//   RGA  — gate drawn uniformly from the four gates, agents in ascending
//          id order (the only strategy that consumes randomness).
//   VEGA — vulnerable agents get params.designated_gate exclusively;
//          normal agents get the nearest of the remaining three gates.
//   CGA  — every agent gets the nearest gate.
void assign_gates(Strategy strategy, EvacWorld& world);

} // namespace crowdsim::evac
