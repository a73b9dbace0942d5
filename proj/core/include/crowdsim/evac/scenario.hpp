#pragma once

#include "crowdsim/evac/model.hpp"

#include <array>
#include <cstdint>

namespace crowdsim::evac {

// Integer head counts for the four quadrants of scenario S4, in order
// top-left, top-right, bottom-left, bottom-right (shares 75/10/10/5%).
// Computed by largest remainder so they sum exactly to the population;
// remainder ties go to the earlier quadrant.
std::array<int, 4> quadrant_quotas(int population);

// Builds the initial world for one scenario: kind labels assigned by
// shuffling ids and marking the first n_vulnerable, per-agent speeds drawn
// from the kind's band, and positions drawn uniformly in the scenario
// region, rejecting any draw within contact_radius of an already placed
// agent. Throws PlacementError (naming the scenario) if a position cannot
// be found within placement_retries attempts.
EvacWorld generate_scenario(Scenario scenario, const EvacParams& params, std::uint64_t seed);

} // namespace crowdsim::evac
