#include "crowdsim/evac/scenario.hpp"

#include "crowdsim/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace crowdsim::evac {

const char* to_string(GateId g) {
    switch (g) {
        case GateId::G1: return "G1";
        case GateId::G2: return "G2";
        case GateId::G3: return "G3";
        case GateId::G4: return "G4";
    }
    return "?";
}

const char* to_string(AgentKind k) {
    return k == AgentKind::Vulnerable ? "vulnerable" : "normal";
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::RGA: return "RGA";
        case Strategy::VEGA: return "VEGA";
        case Strategy::CGA: return "CGA";
    }
    return "?";
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::S1: return "S1";
        case Scenario::S2: return "S2";
        case Scenario::S3: return "S3";
        case Scenario::S4: return "S4";
    }
    return "?";
}

std::array<Gate, 4> make_gates(const EvacParams& p) {
    const double w = p.arena_width;
    const double h = p.arena_height;
    const double g = p.gate_size;
    return {Gate{GateId::G1, Rect{0, 0, g, g}, Vec2{0, 0}},
            Gate{GateId::G2, Rect{w - g, 0, w, g}, Vec2{w, 0}},
            Gate{GateId::G3, Rect{0, h - g, g, h}, Vec2{0, h}},
            Gate{GateId::G4, Rect{w - g, h - g, w, h}, Vec2{w, h}}};
}

EvacWorld::EvacWorld(const EvacParams& p, std::vector<EvacAgent> initial_agents, RngStream rng_in)
    : params(p),
      bounds{0, 0, p.arena_width, p.arena_height},
      gates(make_gates(p)),
      agents(std::move(initial_agents)),
      rng(rng_in),
      // Cell size around half the typical query radius keeps the scan tight.
      index(bounds, std::max(0.25, 0.5 * (p.personal_radius + p.normal_speed_max)),
            static_cast<int>(agents.size())) {
    for (const auto& a : agents) index.insert(a.id, a.pos);
    remaining = static_cast<int>(agents.size());
}

std::array<int, 4> quadrant_quotas(int population) {
    // Largest remainder over percent shares, exact in integer arithmetic:
    // floor(share*P/100) each, then one seat per leftover in descending
    // remainder order (ties -> earlier quadrant).
    static constexpr std::array<int, 4> shares = {75, 10, 10, 5};
    std::array<int, 4> quota{};
    std::array<int, 4> rem{};
    int assigned = 0;
    for (int i = 0; i < 4; ++i) {
        const int scaled = shares[static_cast<std::size_t>(i)] * population;
        quota[static_cast<std::size_t>(i)] = scaled / 100;
        rem[static_cast<std::size_t>(i)] = scaled % 100;
        assigned += quota[static_cast<std::size_t>(i)];
    }
    std::array<int, 4> order = {0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return rem[static_cast<std::size_t>(a)] > rem[static_cast<std::size_t>(b)];
    });
    for (int k = 0; k < population - assigned; ++k)
        ++quota[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    return quota;
}

namespace {

// Quadrants in the screen-oriented arena (y grows downward):
// 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
Rect quadrant_rect(const EvacParams& p, int q) {
    const double mx = p.arena_width * 0.5;
    const double my = p.arena_height * 0.5;
    switch (q) {
        case 0: return {0, 0, mx, my};
        case 1: return {mx, 0, p.arena_width, my};
        case 2: return {0, my, mx, p.arena_height};
        default: return {mx, my, p.arena_width, p.arena_height};
    }
}

Rect placement_region(Scenario s, const EvacParams& p) {
    switch (s) {
        case Scenario::S1: {
            // Central square covering 25% of the arena area.
            const double side = 0.5 * std::sqrt(p.arena_width * p.arena_height);
            const double cx = p.arena_width * 0.5;
            const double cy = p.arena_height * 0.5;
            return {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2};
        }
        case Scenario::S2: {
            // Off-center square strictly inside the top-left quadrant.
            const double side = 0.4 * std::min(p.arena_width, p.arena_height);
            const double cx = p.arena_width * 0.25;
            const double cy = p.arena_height * 0.25;
            return {cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2};
        }
        default:
            return {0, 0, p.arena_width, p.arena_height};
    }
}

Vec2 draw_in(RngStream& rng, const Rect& r) {
    const double x = rng.uniform_real(r.x0, r.x1);
    const double y = rng.uniform_real(r.y0, r.y1);
    return {x, y};
}

} // namespace

EvacWorld generate_scenario(Scenario scenario, const EvacParams& params, std::uint64_t seed) {
    const int population = params.n_vulnerable + params.n_normal;
    if (population < 1) throw PlacementError("generate_scenario: empty population");

    RngStream rng(seed);

    // Kind labels: shuffle ids, first n_vulnerable become vulnerable.
    std::vector<int> ids(static_cast<std::size_t>(population));
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    std::vector<AgentKind> kind(static_cast<std::size_t>(population), AgentKind::Normal);
    for (int i = 0; i < params.n_vulnerable; ++i)
        kind[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = AgentKind::Vulnerable;

    std::vector<EvacAgent> agents(static_cast<std::size_t>(population));
    for (int id = 0; id < population; ++id) {
        auto& a = agents[static_cast<std::size_t>(id)];
        a.id = id;
        a.kind = kind[static_cast<std::size_t>(id)];
        a.speed = a.kind == AgentKind::Vulnerable
                      ? rng.uniform_real(params.vulnerable_speed_min, params.vulnerable_speed_max)
                      : rng.uniform_real(params.normal_speed_min, params.normal_speed_max);
    }

    // Per-agent placement regions. S4 fills quadrants by largest-remainder
    // quotas, agents in ascending id order.
    std::vector<Rect> region(static_cast<std::size_t>(population));
    if (scenario == Scenario::S4) {
        const auto quota = quadrant_quotas(population);
        int id = 0;
        for (int q = 0; q < 4; ++q)
            for (int k = 0; k < quota[static_cast<std::size_t>(q)]; ++k)
                region[static_cast<std::size_t>(id++)] = quadrant_rect(params, q);
    } else {
        const Rect r = placement_region(scenario, params);
        std::fill(region.begin(), region.end(), r);
    }

    // Rejection-sample non-overlapping positions, ascending id order.
    Rect arena{0, 0, params.arena_width, params.arena_height};
    OccupancyIndex placed(arena, std::max(0.25, params.contact_radius * 2.5), population);
    for (int id = 0; id < population; ++id) {
        auto& a = agents[static_cast<std::size_t>(id)];
        bool ok = false;
        for (int attempt = 0; attempt < params.placement_retries; ++attempt) {
            const Vec2 pos = draw_in(rng, region[static_cast<std::size_t>(id)]);
            if (placed.neighbors_within(pos, params.contact_radius).empty()) {
                a.pos = pos;
                placed.insert(id, pos);
                ok = true;
                break;
            }
        }
        if (!ok)
            throw PlacementError(std::string("generate_scenario: cannot place agent without overlap in ") +
                                 to_string(scenario));
    }

    return EvacWorld(params, std::move(agents), rng);
}

} // namespace crowdsim::evac
