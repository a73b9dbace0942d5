#include "crowdsim/evac/engine.hpp"

#include "crowdsim/errors.hpp"
#include "crowdsim/evac/scenario.hpp"
#include "crowdsim/evac/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace crowdsim::evac {

namespace {

// Core of the utility: scored against a prefetched list of (ididx, pos)
// neighbors around the agent's current position. The list must cover at
// least personal_radius + agent.speed so every candidate sees its full
// penalty neighborhood.
std::optional<double> utility_against(const EvacWorld& world, const EvacAgent& agent,
                                      Vec2 candidate,
                                      const std::vector<std::pair<int, Vec2>>& neighbors) {
    const EvacParams& p = world.params;
    double penalty = 0.0;
    for (const auto& [nid, npos] : neighbors) {
        if (nid == agent.id) continue;
        const double d = dist(candidate, npos);
        if (d <= p.contact_radius) return std::nullopt;
        if (d < p.personal_radius) penalty += p.repulsion_weight * (p.personal_radius - d);
    }
    const Vec2 anchor = world.gate(agent.gate).anchor;
    return -dist(candidate, anchor) - penalty;
}

std::vector<std::pair<int, Vec2>> local_neighbors(const EvacWorld& world, const EvacAgent& agent) {
    // Small slack absorbs rounding at the radius boundary.
    const double radius = world.params.personal_radius + agent.speed + 1e-9;
    return world.index.gather_within(agent.pos, radius);
}

} // namespace

std::vector<Vec2> candidate_positions(const EvacWorld& world, const EvacAgent& agent) {
    const int k = world.params.candidate_directions;
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    out.push_back(agent.pos);
    const Vec2 anchor = world.gate(agent.gate).anchor;
    const double bearing = std::atan2(anchor.y - agent.pos.y, anchor.x - agent.pos.x);
    for (int i = 0; i < k; ++i) {
        const double theta = bearing + 2.0 * std::numbers::pi * i / k;
        const Vec2 c{agent.pos.x + agent.speed * std::cos(theta),
                     agent.pos.y + agent.speed * std::sin(theta)};
        if (world.bounds.contains(c)) out.push_back(c);
    }
    return out;
}

std::optional<double> position_utility(const EvacWorld& world, const EvacAgent& agent,
                                       Vec2 candidate) {
    return utility_against(world, agent, candidate, local_neighbors(world, agent));
}

void evac_step(EvacWorld& world) {
    ++world.tick;

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(world.remaining));
    for (const auto& a : world.agents)
        if (!a.evac_time) order.push_back(a.id);
    world.rng.shuffle(order);

    for (int id : order) {
        auto& agent = world.agents[static_cast<std::size_t>(id)];
        const auto neighbors = local_neighbors(world, agent);
        const auto candidates = candidate_positions(world, agent);

        int best = -1;
        double best_score = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto score = utility_against(world, agent, candidates[i], neighbors);
            if (score && (best < 0 || *score > best_score)) {
                best = static_cast<int>(i);
                best_score = *score;
            }
        }
        if (best > 0) {  // index 0 is the stay candidate
            agent.pos = candidates[static_cast<std::size_t>(best)];
            world.index.move(id, agent.pos);
        }

        if (world.gate(agent.gate).region.contains(agent.pos)) {
            agent.evac_time = world.tick;
            world.index.remove(id);
            --world.remaining;
        }
    }
}

double fairness_index(double avg_vulnerable, double avg_normal) {
    if (!(avg_vulnerable > 0.0))
        throw MetricError("fairness_index: undefined, avg_vulnerable must be > 0");
    return avg_normal / avg_vulnerable;
}

EvacMetrics compute_metrics(const EvacWorld& world) {
    double sum_v = 0.0, sum_n = 0.0;
    int count_v = 0, count_n = 0;
    EvacMetrics m;
    for (const auto& a : world.agents) {
        const int t = a.evac_time.value_or(world.params.max_ticks);
        if (a.kind == AgentKind::Vulnerable) {
            sum_v += t;
            ++count_v;
        } else {
            sum_n += t;
            ++count_n;
        }
        if (a.censored) {
            ++m.censored;
        } else if (a.evac_time) {
            auto& gt = m.gate_time[static_cast<std::size_t>(a.gate)];
            gt = std::max(gt, *a.evac_time);
        }
    }
    if (count_v == 0 || count_n == 0)
        throw MetricError("compute_metrics: fairness index undefined, a group is empty");
    m.avg_vulnerable = sum_v / count_v;
    m.avg_normal = sum_n / count_n;
    m.ratio = fairness_index(m.avg_vulnerable, m.avg_normal);
    m.avg_all = (sum_v + sum_n) / (count_v + count_n);
    return m;
}

EvacMetrics run_evacuation(Scenario scenario, Strategy strategy, const EvacParams& params,
                           std::uint64_t seed, const EvacTraceSink& sink) {
    EvacWorld world = generate_scenario(scenario, params, seed);
    assign_gates(strategy, world);

    while (world.remaining > 0 && world.tick < params.max_ticks) {
        evac_step(world);
        if (sink) {
            for (const auto& a : world.agents) {
                if (a.evac_time && *a.evac_time < world.tick) continue;
                sink(EvacTraceRow{world.tick, a.id, a.pos.x, a.pos.y, a.evac_time.has_value()});
            }
        }
    }
    for (auto& a : world.agents) {
        if (!a.evac_time) {
            a.evac_time = params.max_ticks;
            a.censored = true;
        }
    }
    return compute_metrics(world);
}

} // namespace crowdsim::evac
