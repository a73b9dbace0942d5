#include "crowdsim/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdsim {

OccupancyIndex::OccupancyIndex(Rect bounds, double cell_size, int id_capacity)
    : bounds_(bounds), cell_size_(cell_size) {
    if (cell_size <= 0.0) throw std::invalid_argument("OccupancyIndex: cell_size must be > 0");
    if (id_capacity < 0) throw std::invalid_argument("OccupancyIndex: negative id capacity");
    nx_ = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell_size)));
    ny_ = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell_size)));
    cells_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    cell_of_id_.assign(static_cast<std::size_t>(id_capacity), -1);
    pos_of_id_.assign(static_cast<std::size_t>(id_capacity), Vec2{});
}

int OccupancyIndex::cell_index(Vec2 pos) const {
    int ix = static_cast<int>(std::floor((pos.x - bounds_.x0) / cell_size_));
    int iy = static_cast<int>(std::floor((pos.y - bounds_.y0) / cell_size_));
    ix = std::clamp(ix, 0, nx_ - 1);
    iy = std::clamp(iy, 0, ny_ - 1);
    return ix + nx_ * iy;
}

void OccupancyIndex::insert(int id, Vec2 pos) {
    const auto uid = static_cast<std::size_t>(id);
    if (cell_of_id_.at(uid) >= 0) throw std::invalid_argument("OccupancyIndex: id already indexed");
    const int c = cell_index(pos);
    cells_[static_cast<std::size_t>(c)].push_back(id);
    cell_of_id_[uid] = c;
    pos_of_id_[uid] = pos;
    ++count_;
}

void OccupancyIndex::remove(int id) {
    const auto uid = static_cast<std::size_t>(id);
    const int c = cell_of_id_.at(uid);
    if (c < 0) throw std::invalid_argument("OccupancyIndex: id not indexed");
    auto& cell = cells_[static_cast<std::size_t>(c)];
    cell.erase(std::find(cell.begin(), cell.end(), id));
    cell_of_id_[uid] = -1;
    --count_;
}

void OccupancyIndex::move(int id, Vec2 pos) {
    const auto uid = static_cast<std::size_t>(id);
    const int old_cell = cell_of_id_.at(uid);
    if (old_cell < 0) throw std::invalid_argument("OccupancyIndex: id not indexed");
    const int new_cell = cell_index(pos);
    if (new_cell != old_cell) {
        auto& cell = cells_[static_cast<std::size_t>(old_cell)];
        cell.erase(std::find(cell.begin(), cell.end(), id));
        cells_[static_cast<std::size_t>(new_cell)].push_back(id);
        cell_of_id_[uid] = new_cell;
    }
    pos_of_id_[uid] = pos;
}

std::vector<Neighbor> OccupancyIndex::neighbors_within(Vec2 query, double radius) const {
    if (radius < 0.0) throw std::invalid_argument("neighbors_within: radius must be >= 0");
    std::vector<Neighbor> out;
    const double r2 = radius * radius;
    const int ix0 = std::clamp(static_cast<int>(std::floor((query.x - radius - bounds_.x0) / cell_size_)), 0, nx_ - 1);
    const int ix1 = std::clamp(static_cast<int>(std::floor((query.x + radius - bounds_.x0) / cell_size_)), 0, nx_ - 1);
    const int iy0 = std::clamp(static_cast<int>(std::floor((query.y - radius - bounds_.y0) / cell_size_)), 0, ny_ - 1);
    const int iy1 = std::clamp(static_cast<int>(std::floor((query.y + radius - bounds_.y0) / cell_size_)), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            for (int id : cells_[static_cast<std::size_t>(ix + nx_ * iy)]) {
                const double d2 = dist_sq(pos_of_id_[static_cast<std::size_t>(id)], query);
                if (d2 <= r2) out.push_back({id, std::sqrt(d2)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
    });
    return out;
}

std::vector<std::pair<int, Vec2>> OccupancyIndex::gather_within(Vec2 query, double radius) const {
    std::vector<std::pair<int, Vec2>> out;
    const auto sorted = neighbors_within(query, radius);
    out.reserve(sorted.size());
    for (const auto& n : sorted) out.emplace_back(n.id, pos_of_id_[static_cast<std::size_t>(n.id)]);
    return out;
}

} // namespace crowdsim
