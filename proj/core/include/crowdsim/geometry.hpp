#pragma once

#include <cmath>

namespace crowdsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dist_sq(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(Vec2 a, Vec2 b) { return std::sqrt(dist_sq(a, b)); }

// Axis-aligned rectangle, closed on all edges.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Vec2 center() const { return {(x0 + x1) * 0.5, (y0 + y1) * 0.5}; }
    Vec2 clamp(Vec2 p) const {
        return {p.x < x0 ? x0 : (p.x > x1 ? x1 : p.x),
                p.y < y0 ? y0 : (p.y > y1 ? y1 : p.y)};
    }
};

inline bool operator==(const Rect& a, const Rect& b) {
    return a.x0 == b.x0 && a.y0 == b.y0 && a.x1 == b.x1 && a.y1 == b.y1;
}

} // namespace crowdsim
