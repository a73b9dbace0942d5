#include "crowdsim/evac/strategy.hpp"

namespace crowdsim::evac {

GateId nearest_gate(const EvacWorld& world, Vec2 pos) {
    GateId best = GateId::G1;
    double best_d = dist_sq(pos, world.gates[0].anchor);
    for (std::size_t i = 1; i < world.gates.size(); ++i) {
        const double d = dist_sq(pos, world.gates[i].anchor);
        if (d < best_d) {
            best_d = d;
            best = world.gates[i].id;
        }
    }
    return best;
}

GateId nearest_gate_excluding(const EvacWorld& world, Vec2 pos, GateId excluded) {
    bool have = false;
    GateId best = GateId::G1;
    double best_d = 0.0;
    for (const auto& g : world.gates) {
        if (g.id == excluded) continue;
        const double d = dist_sq(pos, g.anchor);
        if (!have || d < best_d) {
            have = true;
            best_d = d;
            best = g.id;
        }
    }
    return best;
}

void assign_gates(Strategy strategy, EvacWorld& world) {
    switch (strategy) {
        case Strategy::RGA:
            for (auto& a : world.agents)
                a.gate = static_cast<GateId>(world.rng.uniform_int(0, 3));
            break;
        case Strategy::VEGA:
            for (auto& a : world.agents)
                a.gate = a.kind == AgentKind::Vulnerable
                             ? world.params.designated_gate
                             : nearest_gate_excluding(world, a.pos, world.params.designated_gate);
            break;
        case Strategy::CGA:
            for (auto& a : world.agents) a.gate = nearest_gate(world, a.pos);
            break;
    }
}

} // namespace crowdsim::evac
