#include <benchmark/benchmark.h>

#include "crowdsim/evac/engine.hpp"
#include "crowdsim/evac/scenario.hpp"
#include "crowdsim/evac/strategy.hpp"
#include "crowdsim/occupancy.hpp"
#include "crowdsim/rng.hpp"
#include "crowdsim/stage/engine.hpp"

using namespace crowdsim;

static void BM_NeighborsWithin(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(7);
    OccupancyIndex idx(Rect{0, 0, 100, 100}, 1.25, n);
    for (int i = 0; i < n; ++i)
        idx.insert(i, {rng.uniform_real(0, 100), rng.uniform_real(0, 100)});
    for (auto _ : state) {
        const Vec2 q{rng.uniform_real(0, 100), rng.uniform_real(0, 100)};
        benchmark::DoNotOptimize(idx.neighbors_within(q, 2.5));
    }
}
BENCHMARK(BM_NeighborsWithin)->Arg(200)->Arg(1363);

static void BM_EvacStep(benchmark::State& state) {
    evac::EvacParams p;
    auto world = evac::generate_scenario(evac::Scenario::S1, p, 1);
    evac::assign_gates(evac::Strategy::CGA, world);
    for (auto _ : state) {
        if (world.remaining == 0) {
            state.PauseTiming();
            world = evac::generate_scenario(evac::Scenario::S1, p, 1);
            evac::assign_gates(evac::Strategy::CGA, world);
            state.ResumeTiming();
        }
        evac::evac_step(world);
    }
}
BENCHMARK(BM_EvacStep)->Unit(benchmark::kMillisecond);

static void BM_EvacRunSmall(benchmark::State& state) {
    evac::EvacParams p;
    p.n_vulnerable = 50;
    p.n_normal = 150;
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            evac::run_evacuation(evac::Scenario::S2, evac::Strategy::VEGA, p, seed++));
    state.SetLabel("200 agents");
}
BENCHMARK(BM_EvacRunSmall)->Unit(benchmark::kMillisecond);

static void BM_StageStep(benchmark::State& state) {
    stage::StageParams p;
    p.map = stage::MapId::C;
    auto world = stage::build_stage_world(p, 1);
    for (auto _ : state) {
        ++world.tick;
        for (auto& a : world.agents) stage::plan_agent_intent(world, a);
        stage::stage_step(world);
        stage::detect_states(world);
        stage::switch_controller(world);
    }
}
BENCHMARK(BM_StageStep)->Unit(benchmark::kMicrosecond);

static void BM_StageRunShort(benchmark::State& state) {
    stage::StageParams p;
    p.map = stage::MapId::C;
    p.run_length = 500;
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(stage::run_stage_sim(p, seed++));
    state.SetLabel("500 ticks");
}
BENCHMARK(BM_StageRunShort)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
