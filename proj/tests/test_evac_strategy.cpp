#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdsim/evac/scenario.hpp"
#include "crowdsim/evac/strategy.hpp"

#include <array>
#include <cmath>

using namespace crowdsim;
using namespace crowdsim::evac;

namespace {

// World with hand-placed agents, bypassing scenario generation.
EvacWorld make_world(std::vector<EvacAgent> agents, const EvacParams& p = EvacParams{},
                     std::uint64_t seed = 1) {
    for (std::size_t i = 0; i < agents.size(); ++i) agents[i].id = static_cast<int>(i);
    return EvacWorld(p, std::move(agents), RngStream(seed));
}

} // namespace

TEST_CASE("CGA assigns the nearest corner") {
    auto world = make_world({EvacAgent{.pos = {1, 1}}, EvacAgent{.pos = {99, 1}},
                             EvacAgent{.pos = {1, 99}}, EvacAgent{.pos = {99, 99}}});
    assign_gates(Strategy::CGA, world);
    CHECK(world.agents[0].gate == GateId::G1);
    CHECK(world.agents[1].gate == GateId::G2);
    CHECK(world.agents[2].gate == GateId::G3);
    CHECK(world.agents[3].gate == GateId::G4);
}

TEST_CASE("nearest-gate ties break toward the lowest gate id") {
    auto world = make_world({EvacAgent{.pos = {50, 50}}});
    CHECK(nearest_gate(world, {50, 50}) == GateId::G1);
}

TEST_CASE("VEGA sends vulnerable agents to the designated gate regardless of distance") {
    auto world = make_world(
        {EvacAgent{.kind = AgentKind::Vulnerable, .pos = {99, 99}}});  // G4 is nearest
    assign_gates(Strategy::VEGA, world);
    CHECK(world.agents[0].gate == GateId::G1);
}

TEST_CASE("VEGA normal agents avoid the designated gate") {
    // (1,1) is closest to G1, but G1 is reserved; G2 and G3 tie at the
    // same distance, so the lower id wins.
    auto world = make_world({EvacAgent{.kind = AgentKind::Normal, .pos = {1, 1}}});
    assign_gates(Strategy::VEGA, world);
    CHECK(world.agents[0].gate == GateId::G2);
}

TEST_CASE("VEGA respects a configured designated gate") {
    EvacParams p;
    p.designated_gate = GateId::G3;
    auto world = make_world({EvacAgent{.kind = AgentKind::Vulnerable, .pos = {99, 1}},
                             EvacAgent{.kind = AgentKind::Normal, .pos = {1, 99}}},
                            p);
    assign_gates(Strategy::VEGA, world);
    CHECK(world.agents[0].gate == GateId::G3);
    // Nearest remaining to (1,99): G1 and G4 tie at d^2 = 9802 -> G1.
    CHECK(world.agents[1].gate == GateId::G1);
}

TEST_CASE("CGA and VEGA do not consume randomness") {
    for (const auto strat : {Strategy::CGA, Strategy::VEGA}) {
        auto world = make_world({EvacAgent{.pos = {10, 20}}, EvacAgent{.pos = {80, 30}}});
        const auto state_before = world.rng.state();
        assign_gates(strat, world);
        CHECK(world.rng.state() == state_before);
    }
}

TEST_CASE("RGA consumes the stream and is seed-reproducible") {
    auto w1 = make_world({EvacAgent{.pos = {10, 20}}, EvacAgent{.pos = {80, 30}}});
    const auto state_before = w1.rng.state();
    assign_gates(Strategy::RGA, w1);
    CHECK(w1.rng.state() != state_before);

    auto w2 = make_world({EvacAgent{.pos = {10, 20}}, EvacAgent{.pos = {80, 30}}});
    assign_gates(Strategy::RGA, w2);
    for (std::size_t i = 0; i < w1.agents.size(); ++i)
        CHECK(w1.agents[i].gate == w2.agents[i].gate);
}

// Frequency oracle: each of 1e5 assignments is uniform over four gates,
// so per-gate counts are Binomial(n, 1/4); require 3 sigma.
TEST_CASE("RGA gate frequencies within 3 sigma of uniform") {
    const int n = 100000;
    std::vector<EvacAgent> agents(static_cast<std::size_t>(n));
    auto world = make_world(std::move(agents));
    assign_gates(Strategy::RGA, world);
    std::array<int, 4> counts{};
    for (const auto& a : world.agents) ++counts[static_cast<std::size_t>(a.gate)];
    const double p = 0.25;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (const int c : counts) CHECK(std::abs(c - n * p) <= 3.0 * sigma);
}
