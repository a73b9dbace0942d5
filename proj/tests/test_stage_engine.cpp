#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdsim/stage/engine.hpp"

#include <cmath>

using namespace crowdsim;
using namespace crowdsim::stage;

namespace {

// World with exactly the agents placed by the test. All original cells are
// vacated before any agent lands on its spot, so relocations cannot clash.
StageWorld bare_world(const StageParams& params, std::vector<GridPoint> spots,
                      std::uint64_t seed = 1) {
    StageParams p = params;
    p.pn = static_cast<int>(spots.size());
    StageWorld world = build_stage_world(p, seed);
    for (auto& a : world.agents) {
        world.grid[static_cast<std::size_t>(StageWorld::cell(a.x, a.y))] = StageWorld::kEmpty;
        --world.subareas[static_cast<std::size_t>(StageWorld::subarea_index_of(a.x, a.y))]
             .occupied;
    }
    for (std::size_t i = 0; i < spots.size(); ++i) {
        auto& a = world.agents[i];
        a.x = spots[i].x;
        a.y = spots[i].y;
        world.grid[static_cast<std::size_t>(StageWorld::cell(a.x, a.y))] = a.id;
        ++world.subareas[static_cast<std::size_t>(StageWorld::subarea_index_of(a.x, a.y))]
             .occupied;
    }
    return world;
}

} // namespace

TEST_CASE("lone agent closes on the stage at full speed") {
    StageParams p;
    p.map = MapId::A;
    auto world = bare_world(p, {{12, 25}});
    auto& a = world.agents[0];
    a.speed = 2;
    a.comfort_distance = 3;
    a.destination = Destination::LeftStage;  // rect x in [0,2], clamp -> (2,25), dist 10
    a.activity = Activity::ToStage;

    const int travel = 10 - a.comfort_distance;
    const int expected_ticks = (travel + a.speed - 1) / a.speed;  // ceil
    int ticks = 0;
    while (a.activity == Activity::ToStage && ticks < 50) {
        world.tick = ++ticks;
        plan_agent_intent(world, a);
        if (a.activity != Activity::ToStage) break;
        stage_step(world);
    }
    // Arrival is registered by intent on the tick after the final move.
    CHECK(ticks == expected_ticks + 1);
    CHECK(a.activity == Activity::AtStage);
    CHECK(a.block_stage == 0);
}

TEST_CASE("a ringed agent is blocked and its counter grows") {
    StageParams p;
    p.map = MapId::A;
    std::vector<GridPoint> spots = {{25, 25}};
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            if (dx != 0 || dy != 0) spots.push_back({25 + dx, 25 + dy});
    auto world = bare_world(p, spots);
    for (auto& a : world.agents) {
        a.activity = Activity::AtStage;  // ring stays put
        a.comfort_distance = 1;
    }
    auto& center = world.agents[0];
    center.activity = Activity::ToFacility;
    center.destination = Destination::Bar;
    center.speed = 1;

    for (int t = 1; t <= 3; ++t) {
        world.tick = t;
        stage_step(world);
        CHECK(center.x == 25);
        CHECK(center.y == 25);
        CHECK(center.block_facility == t);
    }
}

TEST_CASE("blocked also when free neighbors do not decrease the distance") {
    StageParams p;
    p.map = MapId::A;
    p.facility_radius = 0;         // force travel onto the exact bar patch
    p.facility_settle_radius = 0;  // and disable queue settling
    // Destination east; the three eastern neighbors are occupied, everything
    // else is free but farther from the bar column.
    auto world = bare_world(p, {{24, 2}, {25, 3}, {25, 2}, {25, 1}});
    auto& a = world.agents[0];
    a.activity = Activity::ToFacility;
    a.destination = Destination::Bar;  // bar at (25,2), one step east
    a.speed = 1;
    for (auto& other : world.agents)
        if (other.id != 0) other.activity = Activity::AtStage;

    world.tick = 1;
    stage_step(world);
    CHECK(a.x == 24);
    CHECK(a.y == 2);
    CHECK(a.block_facility == 1);
}

TEST_CASE("movement picks the distance-minimizing neighbor with fixed tie order") {
    StageParams p;
    p.map = MapId::A;
    auto world = bare_world(p, {{10, 10}});
    auto& a = world.agents[0];
    a.activity = Activity::ToFacility;
    a.destination = Destination::Bar;  // (25,2): southeast of the agent
    a.speed = 1;
    world.tick = 1;
    stage_step(world);
    CHECK(a.x == 11);
    CHECK(a.y == 9);  // SE strictly dominates
    CHECK(a.block_facility == 0);
}

TEST_CASE("dwell ends and the agent retargets the open stage") {
    StageParams p;
    p.map = MapId::A;
    auto world = bare_world(p, {{25, 10}});
    auto& a = world.agents[0];
    a.activity = Activity::AtFacility;
    a.destination = Destination::Bar;
    a.dwell_remaining = 1;
    world.tick = 1;
    plan_agent_intent(world, a);
    CHECK(a.activity == Activity::ToStage);
    CHECK(a.destination == stage_destination(world.open_stage));
}

TEST_CASE("hesitation delays retargeting for exactly its duration") {
    StageParams p;
    p.map = MapId::A;
    auto world = bare_world(p, {{25, 25}});
    auto& a = world.agents[0];
    a.activity = Activity::Hesitating;
    a.destination = Destination::LeftStage;  // stale target, right stage open
    a.hesitation_remaining = 5;
    int retarget_tick = -1;
    for (int t = 1; t <= 10; ++t) {
        world.tick = t;
        plan_agent_intent(world, a);
        if (retarget_tick < 0 && a.activity != Activity::Hesitating) retarget_tick = t;
    }
    CHECK(retarget_tick == 5);
    CHECK(a.destination == Destination::RightStage);
}

TEST_CASE("trip initiation matches the configured fraction within 3 sigma") {
    StageParams p;
    p.map = MapId::C;
    p.pn = 150;
    p.run_length = 2000;  // 40 rounds
    run_stage_sim(p, 7);

    StageWorld world = build_stage_world(p, 7);
    // Re-run manually to read the tallies.
    for (int t = 1; t <= p.run_length; ++t) {
        world.tick = t;
        for (auto& a : world.agents) plan_agent_intent(world, a);
        stage_step(world);
        detect_states(world);
        switch_controller(world);
    }
    REQUIRE(world.trip_candidates > 1000);
    const double n = static_cast<double>(world.trip_candidates);
    const double frac = static_cast<double>(world.trip_starts) / n;
    const double sigma = std::sqrt(0.4 * 0.6 / n);
    CHECK(std::abs(frac - p.trip_fraction) <= 3.0 * sigma);
}

TEST_CASE("crowded needs both occupancy above 70% and a flagged agent") {
    StageParams p;
    p.map = MapId::A;
    p.st = 30;

    // Interior subarea (1,1): patches x in [5,9], y in [5,9], 25 cells.
    const auto fill_subarea = [&](int count) {
        std::vector<GridPoint> spots;
        for (int y = 5; y <= 9 && static_cast<int>(spots.size()) < count; ++y)
            for (int x = 5; x <= 9 && static_cast<int>(spots.size()) < count; ++x)
                spots.push_back({x, y});
        return spots;
    };

    SUBCASE("18 of 25 occupied (72%) with one surging agent -> crowded") {
        auto world = bare_world(p, fill_subarea(18));
        for (auto& a : world.agents) a.activity = Activity::AtStage;
        world.agents[0].activity = Activity::ToStage;
        world.agents[0].destination = Destination::RightStage;
        world.agents[0].block_stage = p.st + 1;
        detect_states(world);
        CHECK(world.agents[0].surge);
        CHECK(world.subareas[11].crowded);
        CHECK(world.subareas[11].crowded_since == 1);
    }

    SUBCASE("17 of 25 occupied (68%) with one surging agent -> not crowded") {
        auto world = bare_world(p, fill_subarea(17));
        for (auto& a : world.agents) a.activity = Activity::AtStage;
        world.agents[0].activity = Activity::ToStage;
        world.agents[0].destination = Destination::RightStage;
        world.agents[0].block_stage = p.st + 1;
        detect_states(world);
        CHECK_FALSE(world.subareas[11].crowded);
    }

    SUBCASE("20 of 25 occupied without flagged agents -> not crowded") {
        auto world = bare_world(p, fill_subarea(20));
        for (auto& a : world.agents) a.activity = Activity::AtStage;
        detect_states(world);
        CHECK_FALSE(world.subareas[11].crowded);
        CHECK(world.subareas[11].crowded_since == 0);
    }
}

TEST_CASE("crowded timer tracks the current crowded run") {
    StageParams p;
    p.map = MapId::A;
    std::vector<GridPoint> spots;
    for (int y = 5; y <= 9; ++y)
        for (int x = 5; x <= 9 && static_cast<int>(spots.size()) < 18; ++x)
            spots.push_back({x, y});
    auto world = bare_world(p, spots);
    for (auto& a : world.agents) a.activity = Activity::AtStage;
    auto& flagged = world.agents[0];
    flagged.activity = Activity::ToStage;
    flagged.destination = Destination::RightStage;
    flagged.block_stage = p.st + 1;

    detect_states(world);
    detect_states(world);
    detect_states(world);
    CHECK(world.subareas[11].crowded_since == 3);

    flagged.block_stage = 0;  // condition breaks
    detect_states(world);
    CHECK(world.subareas[11].crowded_since == 0);
}

TEST_CASE("flags imply destination kind and threshold crossing") {
    StageParams p;
    p.map = MapId::A;
    auto world = bare_world(p, {{10, 10}, {12, 10}});
    auto& a = world.agents[0];
    a.activity = Activity::ToStage;
    a.destination = Destination::RightStage;
    a.block_stage = p.st;  // at but not above the threshold
    auto& b = world.agents[1];
    b.activity = Activity::ToFacility;
    b.destination = Destination::Restroom;
    b.block_facility = p.pt + 1;

    detect_states(world);
    CHECK_FALSE(a.surge);
    CHECK_FALSE(a.panic);
    CHECK(b.panic);
    CHECK_FALSE(b.surge);
}

namespace {

// Drives the subarea (1,1) into a qualifying state: its own timer beyond
// SI plus two crowded 4-neighbors.
StageWorld qualifying_world(const StageParams& params) {
    std::vector<GridPoint> spots;
    const auto fill = [&spots](int sx, int sy, int count) {
        for (int y = sy * 5; y <= sy * 5 + 4; ++y)
            for (int x = sx * 5; x <= sx * 5 + 4; ++x) {
                if (count-- <= 0) return;
                spots.push_back({x, y});
            }
    };
    fill(1, 1, 18);
    fill(0, 1, 18);
    fill(2, 1, 18);
    StageWorld world = bare_world(params, spots);
    for (auto& a : world.agents) a.activity = Activity::AtStage;
    // One surging agent in each of the three subareas.
    for (const int idx : {0, 18, 36}) {
        auto& a = world.agents[static_cast<std::size_t>(idx)];
        a.activity = Activity::ToStage;
        a.destination = stage_destination(world.open_stage);
        a.block_stage = params.st + 100;
    }
    return world;
}

} // namespace

TEST_CASE("switch fires when the timer and two crowded neighbors align") {
    StageParams p;
    p.map = MapId::A;
    p.si = 3;
    auto world = qualifying_world(p);
    for (int t = 1; t <= p.si + 1; ++t) {
        world.tick = t;
        detect_states(world);
        const bool switched = switch_controller(world);
        if (t <= p.si) {
            CHECK_FALSE(switched);
        } else {
            CHECK(switched);  // timer = SI+1 > SI
        }
    }
    CHECK(world.open_stage == 0);
    REQUIRE(world.switch_log.size() == 1);
    CHECK(world.switch_log[0] == p.si + 1);
    for (const auto& s : world.subareas) CHECK(s.crowded_since == 0);
    // Agents that targeted the closed stage hesitate.
    for (const int idx : {0, 18, 36}) {
        const auto& a = world.agents[static_cast<std::size_t>(idx)];
        CHECK(a.activity == Activity::Hesitating);
        CHECK(a.hesitation_remaining == a.hesitation);
        CHECK(a.block_stage == 0);
        CHECK_FALSE(a.surge);
    }
}

TEST_CASE("no switch without two crowded neighbors") {
    StageParams p;
    p.map = MapId::A;
    p.si = 2;
    // Only the center subarea crowded; neighbors stay quiet.
    std::vector<GridPoint> spots;
    for (int y = 5; y <= 9; ++y)
        for (int x = 5; x <= 9 && static_cast<int>(spots.size()) < 18; ++x)
            spots.push_back({x, y});
    auto world = bare_world(p, spots);
    for (auto& a : world.agents) a.activity = Activity::AtStage;
    world.agents[0].activity = Activity::ToStage;
    world.agents[0].destination = stage_destination(world.open_stage);
    world.agents[0].block_stage = p.st + 100;

    for (int t = 1; t <= 10; ++t) {
        world.tick = t;
        detect_states(world);
        CHECK_FALSE(switch_controller(world));
    }
    CHECK(world.switch_log.empty());
}

TEST_CASE("at most one switch per tick") {
    StageParams p;
    p.map = MapId::A;
    p.si = 1;
    auto world = qualifying_world(p);
    // Mirror the qualifying block into subareas (1,7)/(0,7)/(2,7) as well.
    auto mirror = qualifying_world(p);
    for (const auto& src : mirror.agents) {
        const int y = src.y + 30;
        StageAgent a = src;
        a.id = static_cast<int>(world.agents.size());
        a.x = src.x;
        a.y = y;
        world.agents.push_back(a);
        world.grid[static_cast<std::size_t>(StageWorld::cell(a.x, a.y))] = a.id;
        ++world.subareas[static_cast<std::size_t>(StageWorld::subarea_index_of(a.x, a.y))]
             .occupied;
    }
    for (int t = 1; t <= p.si + 1; ++t) {
        world.tick = t;
        detect_states(world);
        switch_controller(world);
    }
    CHECK(world.switch_log.size() == 1);
}

TEST_CASE("metric arithmetic") {
    CHECK(switch_frequency(50, 5000) == doctest::Approx(0.010));
    CHECK(average_panic_surge(0 + 1 + 2, 3) == doctest::Approx(1.0));
}

TEST_CASE("a single agent never panics or switches") {
    StageParams p;
    p.map = MapId::C;
    p.pn = 1;
    p.run_length = 500;
    const auto m = run_stage_sim(p, 3);
    CHECK(m.switch_count == 0);
    CHECK(m.frequency == 0.0);
    CHECK(m.aps == 0.0);
}

TEST_CASE("ten-agent run is deterministic over 200 ticks") {
    StageParams p;
    p.map = MapId::A;
    p.pn = 10;
    p.run_length = 200;
    const auto a = run_stage_sim(p, 21);
    const auto b = run_stage_sim(p, 21);
    CHECK(a.switch_log == b.switch_log);
    CHECK(a.panic_timeline == b.panic_timeline);
    CHECK(a.surge_timeline == b.surge_timeline);
    CHECK(a.frequency == b.frequency);
    CHECK(a.aps == b.aps);
}

TEST_CASE("occupancy stays exclusive and population constant during a run") {
    StageParams p;
    p.map = MapId::B;
    p.pn = 120;
    p.run_length = 150;
    StageWorld world = build_stage_world(p, 9);
    for (int t = 1; t <= p.run_length; ++t) {
        world.tick = t;
        for (auto& a : world.agents) plan_agent_intent(world, a);
        stage_step(world);
        detect_states(world);
        switch_controller(world);

        int on_grid = 0;
        for (int y = 0; y < kGridSize; ++y)
            for (int x = 0; x < kGridSize; ++x) {
                const int v = world.at(x, y);
                if (v >= 0) {
                    ++on_grid;
                    CHECK(world.agents[static_cast<std::size_t>(v)].x == x);
                    CHECK(world.agents[static_cast<std::size_t>(v)].y == y);
                }
            }
        CHECK(on_grid == p.pn);
    }
}
