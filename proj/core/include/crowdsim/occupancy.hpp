#pragma once

#include "crowdsim/geometry.hpp"

#include <utility>
#include <vector>

namespace crowdsim {

struct Neighbor {
    int id;
    double distance;
};

// Uniform-grid spatial index over a bounded arena.
//
// Agents are identified by dense non-negative ids below the capacity given
// at construction. Every indexed agent lives in exactly one cell; queries
// return exactly the agents within Euclidean distance r (inclusive),
// sorted by (distance, id) so results are deterministic.
class OccupancyIndex {
public:
    OccupancyIndex(Rect bounds, double cell_size, int id_capacity);

    void insert(int id, Vec2 pos);
    void remove(int id);
    void move(int id, Vec2 pos);

    bool contains(int id) const { return cell_of_id_[static_cast<std::size_t>(id)] >= 0; }
    Vec2 position_of(int id) const { return pos_of_id_[static_cast<std::size_t>(id)]; }
    int size() const { return count_; }

    // All indexed agents with ||pos_a - query|| <= radius, sorted by
    // (distance, id).
    std::vector<Neighbor> neighbors_within(Vec2 query, double radius) const;

    // Same selection, but carrying positions; sorted identically. Used on
    // the hot path where the caller re-measures distances from candidate
    // points.
    std::vector<std::pair<int, Vec2>> gather_within(Vec2 query, double radius) const;

private:
    int cell_index(Vec2 pos) const;

    Rect bounds_;
    double cell_size_;
    int nx_ = 0;
    int ny_ = 0;
    int count_ = 0;
    std::vector<std::vector<int>> cells_;
    std::vector<int> cell_of_id_;   // -1 when the id is not indexed
    std::vector<Vec2> pos_of_id_;
};

} // namespace crowdsim
