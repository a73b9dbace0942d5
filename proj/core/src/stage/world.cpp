#include "crowdsim/errors.hpp"
#include "crowdsim/stage/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace crowdsim::stage {

const char* to_string(MapId m) {
    switch (m) {
        case MapId::A: return "A";
        case MapId::B: return "B";
        case MapId::C: return "C";
    }
    return "?";
}

const char* to_string(Activity a) {
    switch (a) {
        case Activity::ToStage: return "to_stage";
        case Activity::AtStage: return "at_stage";
        case Activity::ToFacility: return "to_facility";
        case Activity::AtFacility: return "at_facility";
        case Activity::Hesitating: return "hesitating";
    }
    return "?";
}

const char* to_string(Destination d) {
    switch (d) {
        case Destination::LeftStage: return "left_stage";
        case Destination::RightStage: return "right_stage";
        case Destination::Bar: return "bar";
        case Destination::Restroom: return "restroom";
    }
    return "?";
}

namespace {

// Identical 3x11 stages in three position setups, so the map comparison
// varies position only. Corner stages stand a few patches off the walls;
// flush-corner mounting would halve the audience area around them and
// confound position with capacity.
std::array<GridRect, 2> map_stages(MapId map) {
    switch (map) {
        case MapId::A:  // facing each other across the middle
            return {GridRect{0, 20, 2, 30}, GridRect{48, 20, 50, 30}};
        case MapId::B:  // mid-left edge and bottom-right corner
            return {GridRect{0, 20, 2, 30}, GridRect{44, 4, 46, 14}};
        case MapId::C:  // top-left and bottom-right corners
            return {GridRect{4, 36, 6, 46}, GridRect{44, 4, 46, 14}};
    }
    return {};
}

std::vector<Subarea> make_subareas() {
    std::vector<Subarea> out;
    out.reserve(kSubareaTiles * kSubareaTiles);
    for (int sy = 0; sy < kSubareaTiles; ++sy) {
        for (int sx = 0; sx < kSubareaTiles; ++sx) {
            GridRect r;
            r.x0 = sx * kSubareaStride;
            r.y0 = sy * kSubareaStride;
            r.x1 = (sx == kSubareaTiles - 1) ? kGridSize - 1 : r.x0 + kSubareaStride - 1;
            r.y1 = (sy == kSubareaTiles - 1) ? kGridSize - 1 : r.y0 + kSubareaStride - 1;
            Subarea s;
            s.cells = r;
            s.patches = r.patch_count();
            out.push_back(s);
        }
    }
    return out;
}

} // namespace

StageWorld build_stage_world(const StageParams& params, std::uint64_t seed) {
    StageWorld world{RngStream(seed)};
    world.params = params;
    world.stage_rect = map_stages(params.map);
    // [0] must be the stage with the smaller center x.
    if (world.stage_rect[0].x0 + world.stage_rect[0].x1 >
        world.stage_rect[1].x0 + world.stage_rect[1].x1)
        std::swap(world.stage_rect[0], world.stage_rect[1]);
    world.open_stage = params.open_right_first ? 1 : 0;
    world.subareas = make_subareas();

    world.grid.assign(kGridSize * kGridSize, StageWorld::kEmpty);
    for (const auto& rect : world.stage_rect)
        for (int y = rect.y0; y <= rect.y1; ++y)
            for (int x = rect.x0; x <= rect.x1; ++x)
                world.grid[static_cast<std::size_t>(StageWorld::cell(x, y))] = StageWorld::kBlocked;

    std::vector<GridPoint> free_cells;
    for (int y = 0; y < kGridSize; ++y)
        for (int x = 0; x < kGridSize; ++x)
            if (world.at(x, y) == StageWorld::kEmpty) free_cells.push_back({x, y});

    if (params.pn > static_cast<int>(free_cells.size()))
        throw PlacementError("build_stage_world: PN=" + std::to_string(params.pn) +
                             " exceeds " + std::to_string(free_cells.size()) + " free patches");

    // Distinct patches via a partial Fisher-Yates over the free list.
    world.agents.resize(static_cast<std::size_t>(params.pn));
    for (int i = 0; i < params.pn; ++i) {
        const auto j = static_cast<std::size_t>(
            world.rng.uniform_int(i, static_cast<std::int64_t>(free_cells.size()) - 1));
        std::swap(free_cells[static_cast<std::size_t>(i)], free_cells[j]);
        const GridPoint p = free_cells[static_cast<std::size_t>(i)];
        auto& a = world.agents[static_cast<std::size_t>(i)];
        a.id = i;
        a.x = p.x;
        a.y = p.y;
        world.grid[static_cast<std::size_t>(StageWorld::cell(p.x, p.y))] = i;
        ++world.subareas[static_cast<std::size_t>(StageWorld::subarea_index_of(p.x, p.y))].occupied;
    }

    // Half the agents (rounded down) walk at speed 2, chosen by shuffle.
    std::vector<int> ids(static_cast<std::size_t>(params.pn));
    std::iota(ids.begin(), ids.end(), 0);
    world.rng.shuffle(ids);
    for (int i = 0; i < params.pn; ++i)
        world.agents[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].speed =
            i < params.pn / 2 ? 2 : 1;

    const Destination open = stage_destination(world.open_stage);
    for (auto& a : world.agents) {
        a.comfort_distance = static_cast<int>(world.rng.uniform_int(1, 10));
        a.hesitation = static_cast<int>(world.rng.uniform_int(1, 20));
        a.destination = open;
        assign_stage_spot(world, a);
        const long long d2 = dest_dist_sq(world, open, a.x, a.y);
        const long long comfort = a.comfort_distance;
        a.activity = d2 <= comfort * comfort ? Activity::AtStage : Activity::ToStage;
    }

    return world;
}

} // namespace crowdsim::stage
