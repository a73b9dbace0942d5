#include "crowdsim/stage/engine.hpp"

#include <algorithm>
#include <numeric>

namespace crowdsim::stage {

namespace {

// Fixed tie-break order: N, NE, E, SE, S, SW, W, NW (y grows upward).
constexpr int kNeighborDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNeighborDy[8] = {1, 1, 0, -1, -1, -1, 0, 1};

void reset_journey_counters(StageAgent& agent) {
    agent.block_stage = 0;
    agent.block_facility = 0;
    agent.panic = false;
    agent.surge = false;
}

// New destination starts a new journey; stale blocking state is dropped.
void set_destination(StageAgent& agent, Destination dest) {
    agent.destination = dest;
    reset_journey_counters(agent);
}

long long arrival_radius_sq(const StageWorld& world, const StageAgent& agent) {
    const long long r = is_stage(agent.destination)
                            ? agent.comfort_distance
                            : world.params.facility_radius;
    return r * r;
}

bool arrived(const StageWorld& world, const StageAgent& agent) {
    return dest_dist_sq(world, agent.destination, agent.x, agent.y) <=
           arrival_radius_sq(world, agent);
}

} // namespace

long long dest_dist_sq(const StageWorld& world, Destination dest, int x, int y) {
    GridPoint target;
    switch (dest) {
        case Destination::Bar: target = world.bar; break;
        case Destination::Restroom: target = world.restroom; break;
        default: target = world.stage_rect[static_cast<std::size_t>(stage_index(dest))].clamp({x, y});
    }
    const long long dx = target.x - x;
    const long long dy = target.y - y;
    return dx * dx + dy * dy;
}

namespace {

// Where the agent is actually walking to: its personal spot for stages,
// the facility patch for trips.
GridPoint move_target(const StageWorld& world, const StageAgent& agent) {
    switch (agent.destination) {
        case Destination::Bar: return world.bar;
        case Destination::Restroom: return world.restroom;
        default: return {agent.spot_x, agent.spot_y};
    }
}

long long target_dist_sq(GridPoint target, int x, int y) {
    const long long dx = target.x - x;
    const long long dy = target.y - y;
    return dx * dx + dy * dy;
}

} // namespace

void assign_stage_spot(StageWorld& world, StageAgent& agent) {
    const auto& rect = world.stage_rect[static_cast<std::size_t>(stage_index(agent.destination))];
    // Uniform point on the rect perimeter, pushed outward by the agent's
    // comfort distance, clamped to the grid.
    const int w = rect.x1 - rect.x0 + 1;
    const int h = rect.y1 - rect.y0 + 1;
    const int perimeter = 2 * (w + h);
    const int t = static_cast<int>(world.rng.uniform_int(0, perimeter - 1));
    int px, py, nx, ny;  // perimeter point and outward normal
    if (t < w) {
        px = rect.x0 + t; py = rect.y0; nx = 0; ny = -1;
    } else if (t < w + h) {
        px = rect.x1; py = rect.y0 + (t - w); nx = 1; ny = 0;
    } else if (t < 2 * w + h) {
        px = rect.x1 - (t - w - h); py = rect.y1; nx = 0; ny = 1;
    } else {
        px = rect.x0; py = rect.y1 - (t - 2 * w - h); nx = -1; ny = 0;
    }
    const int c = agent.comfort_distance;
    agent.spot_x = std::clamp(px + nx * c, 0, kGridSize - 1);
    agent.spot_y = std::clamp(py + ny * c, 0, kGridSize - 1);
}

void plan_agent_intent(StageWorld& world, StageAgent& agent) {
    switch (agent.activity) {
        case Activity::Hesitating:
            if (--agent.hesitation_remaining <= 0) {
                set_destination(agent, stage_destination(world.open_stage));
                assign_stage_spot(world, agent);
                agent.activity = Activity::ToStage;
            }
            break;
        case Activity::AtFacility:
            if (--agent.dwell_remaining <= 0) {
                set_destination(agent, stage_destination(world.open_stage));
                assign_stage_spot(world, agent);
                agent.activity = Activity::ToStage;
            }
            break;
        default:
            break;
    }

    if (agent.activity == Activity::ToStage && arrived(world, agent)) {
        agent.activity = Activity::AtStage;
        reset_journey_counters(agent);
    } else if (agent.activity == Activity::ToFacility && arrived(world, agent)) {
        agent.activity = Activity::AtFacility;
        agent.dwell_remaining = world.params.brt;
        reset_journey_counters(agent);
    }

    // Trip-initiation round: agents not already on a trip head to the bar
    // or restroom (50/50) with probability trip_fraction.
    if (world.params.brf > 0 && world.tick > 0 && world.tick % world.params.brf == 0 &&
        (agent.activity == Activity::ToStage || agent.activity == Activity::AtStage)) {
        ++world.trip_candidates;
        if (world.rng.uniform_real(0.0, 1.0) < world.params.trip_fraction) {
            ++world.trip_starts;
            set_destination(agent,
                            world.rng.uniform_int(0, 1) == 0 ? Destination::Bar
                                                             : Destination::Restroom);
            agent.activity = Activity::ToFacility;
        }
    }
}

void stage_step(StageWorld& world) {
    std::vector<int> order(world.agents.size());
    std::iota(order.begin(), order.end(), 0);
    world.rng.shuffle(order);

    for (int id : order) {
        auto& agent = world.agents[static_cast<std::size_t>(id)];
        if (agent.activity != Activity::ToStage && agent.activity != Activity::ToFacility)
            continue;

        const long long stop_at = arrival_radius_sq(world, agent);
        const GridPoint target = move_target(world, agent);
        bool moved = false;
        bool attempted = false;
        for (int m = 0; m < agent.speed; ++m) {
            // Arrival is measured against the stage/facility itself, not the
            // personal spot.
            if (dest_dist_sq(world, agent.destination, agent.x, agent.y) <= stop_at) break;
            const long long cur = target_dist_sq(target, agent.x, agent.y);
            attempted = true;

            // Free neighbors take priority; when none improves, an occupied
            // neighbor may give way by swapping places with the mover.
            // Without swaps, settled crowds are impenetrable walls and
            // opposing flows deadlock at crowd boundaries.
            int best_free = -1, best_swap = -1;
            long long best_free_d = cur, best_swap_d = cur;
            for (int n = 0; n < 8; ++n) {
                const int nx = agent.x + kNeighborDx[n];
                const int ny = agent.y + kNeighborDy[n];
                if (!StageWorld::in_grid(nx, ny)) continue;
                const int occ = world.at(nx, ny);
                const long long d = target_dist_sq(target, nx, ny);
                if (occ == StageWorld::kEmpty) {
                    if (d < best_free_d) {
                        best_free_d = d;
                        best_free = n;
                    }
                } else if (occ >= 0 && d < best_swap_d) {
                    best_swap_d = d;
                    best_swap = n;
                }
            }

            if (best_free >= 0) {
                auto& from_sub = world.subareas[static_cast<std::size_t>(
                    StageWorld::subarea_index_of(agent.x, agent.y))];
                world.grid[static_cast<std::size_t>(StageWorld::cell(agent.x, agent.y))] =
                    StageWorld::kEmpty;
                agent.x += kNeighborDx[best_free];
                agent.y += kNeighborDy[best_free];
                world.grid[static_cast<std::size_t>(StageWorld::cell(agent.x, agent.y))] = id;
                auto& to_sub = world.subareas[static_cast<std::size_t>(
                    StageWorld::subarea_index_of(agent.x, agent.y))];
                if (&from_sub != &to_sub) {
                    --from_sub.occupied;
                    ++to_sub.occupied;
                }
                moved = true;
            } else if (best_swap >= 0) {
                auto& other = world.agents[static_cast<std::size_t>(
                    world.at(agent.x + kNeighborDx[best_swap], agent.y + kNeighborDy[best_swap]))];
                const bool other_idle = other.activity != Activity::ToStage &&
                                        other.activity != Activity::ToFacility;
                const double give_way = other_idle ? world.params.yield_probability
                                                   : world.params.push_probability;
                if (!(world.rng.uniform_real(0.0, 1.0) < give_way)) break;
                // Both cells stay occupied, so subarea tallies are unchanged.
                std::swap(agent.x, other.x);
                std::swap(agent.y, other.y);
                world.grid[static_cast<std::size_t>(StageWorld::cell(agent.x, agent.y))] = id;
                world.grid[static_cast<std::size_t>(StageWorld::cell(other.x, other.y))] =
                    other.id;
                moved = true;
            } else {
                break;
            }
        }

        if (!attempted) continue;
        if (is_stage(agent.destination)) {
            if (moved) {
                agent.block_stage = 0;
                agent.surge = false;
            } else {
                // A blocked stage-goer already inside the settle zone takes
                // the spot it has; its preferred ring is full. Blocking
                // counts as surge pressure only beyond that zone.
                const long long settle = world.params.settle_radius;
                if (dest_dist_sq(world, agent.destination, agent.x, agent.y) <= settle * settle) {
                    agent.activity = Activity::AtStage;
                    reset_journey_counters(agent);
                } else if (++agent.block_stage > world.params.st + world.params.giveup_margin) {
                    // Hopelessly stuck: give up pushing and watch from here.
                    agent.activity = Activity::AtStage;
                    reset_journey_counters(agent);
                }
            }
        } else {
            if (moved) {
                agent.block_facility = 0;
                agent.panic = false;
            } else {
                // Queueing at a full bar or restroom counts as the visit.
                const long long settle = world.params.facility_settle_radius;
                if (dest_dist_sq(world, agent.destination, agent.x, agent.y) <= settle * settle) {
                    agent.activity = Activity::AtFacility;
                    agent.dwell_remaining = world.params.brt;
                    reset_journey_counters(agent);
                } else if (++agent.block_facility >
                           world.params.pt + world.params.giveup_margin) {
                    // Give up on reaching the counter and finish the errand
                    // from here; the dwell clock staggers re-entry.
                    agent.activity = Activity::AtFacility;
                    agent.dwell_remaining = world.params.brt;
                    reset_journey_counters(agent);
                }
            }
        }
    }
}

std::pair<int, int> detect_states(StageWorld& world) {
    for (auto& s : world.subareas) s.has_flagged = false;

    int panic_count = 0;
    int surge_count = 0;
    for (auto& a : world.agents) {
        a.panic = is_facility(a.destination) && a.block_facility > world.params.pt;
        a.surge = is_stage(a.destination) && a.block_stage > world.params.st;
        if (a.panic) ++panic_count;
        if (a.surge) ++surge_count;
        if (a.panic || a.surge)
            world.subareas[static_cast<std::size_t>(StageWorld::subarea_index_of(a.x, a.y))]
                .has_flagged = true;
    }

    for (auto& s : world.subareas) {
        s.crowded = s.has_flagged &&
                    static_cast<double>(s.occupied) >
                        world.params.crowded_fraction * static_cast<double>(s.patches);
        s.crowded_since = s.crowded ? s.crowded_since + 1 : 0;
    }
    return {panic_count, surge_count};
}

bool switch_controller(StageWorld& world) {
    for (int idx = 0; idx < static_cast<int>(world.subareas.size()); ++idx) {
        if (world.subareas[static_cast<std::size_t>(idx)].crowded_since <= world.params.si)
            continue;
        const int sx = idx % kSubareaTiles;
        const int sy = idx / kSubareaTiles;
        int crowded_neighbors = 0;
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        for (int n = 0; n < 4; ++n) {
            const int tx = sx + dx[n];
            const int ty = sy + dy[n];
            if (tx < 0 || tx >= kSubareaTiles || ty < 0 || ty >= kSubareaTiles) continue;
            if (world.subareas[static_cast<std::size_t>(tx + kSubareaTiles * ty)].crowded)
                ++crowded_neighbors;
        }
        if (crowded_neighbors < 2) continue;

        const int old_stage = world.open_stage;
        world.open_stage = 1 - world.open_stage;
        world.switch_log.push_back(world.tick);
        for (auto& s : world.subareas) s.crowded_since = 0;
        for (auto& a : world.agents) {
            if (is_stage(a.destination) && stage_index(a.destination) == old_stage) {
                a.activity = Activity::Hesitating;
                a.hesitation_remaining = a.hesitation;
                reset_journey_counters(a);
            }
        }
        return true;
    }
    return false;
}

double switch_frequency(int switch_count, int run_length) {
    return run_length > 0 ? static_cast<double>(switch_count) / run_length : 0.0;
}

double average_panic_surge(long long flagged_total, int run_length) {
    return run_length > 0 ? static_cast<double>(flagged_total) / run_length : 0.0;
}

StageMetrics run_stage_sim(const StageParams& params, std::uint64_t seed,
                           const StageTraceSink& sink) {
    StageWorld world = build_stage_world(params, seed);

    StageMetrics metrics;
    metrics.panic_timeline.reserve(static_cast<std::size_t>(params.run_length));
    metrics.surge_timeline.reserve(static_cast<std::size_t>(params.run_length));
    long long flagged_total = 0;

    for (int t = 1; t <= params.run_length; ++t) {
        world.tick = t;
        for (auto& a : world.agents) plan_agent_intent(world, a);
        stage_step(world);
        const auto [panic_count, surge_count] = detect_states(world);

        StageTickTrace row;
        if (sink) {
            row.tick = t;
            row.open_stage = world.open_stage;
            row.panic_count = panic_count;
            row.surge_count = surge_count;
            row.subareas.reserve(world.subareas.size());
            for (const auto& s : world.subareas)
                row.subareas.push_back({static_cast<double>(s.occupied) / s.patches, s.crowded,
                                        s.crowded_since});
        }

        const bool switched = switch_controller(world);

        flagged_total += panic_count + surge_count;
        metrics.panic_timeline.push_back(panic_count);
        metrics.surge_timeline.push_back(surge_count);

        if (sink) {
            row.switched = switched;
            sink(row);
        }
    }

    metrics.switch_log = world.switch_log;
    metrics.switch_count = static_cast<int>(world.switch_log.size());
    metrics.frequency = switch_frequency(metrics.switch_count, params.run_length);
    metrics.aps = average_panic_surge(flagged_total, params.run_length);
    return metrics;
}

} // namespace crowdsim::stage
