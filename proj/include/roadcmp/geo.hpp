#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace roadcmp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // counter-clockwise perpendicular
    Vec2 perp() const { return {-y, x}; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// Parameter of the point on segment [a,b] closest to p, clamped to [0,1].
inline double project_param(const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 d = b - a;
    const double len2 = d.squared_norm();
    if (len2 <= 0.0) return 0.0;
    return std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
}

inline double point_segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
    return distance(p, lerp(a, b, project_param(a, b, p)));
}

struct BBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    bool empty() const { return min_x > max_x || min_y > max_y; }
    double width() const { return empty() ? 0.0 : max_x - min_x; }
    double height() const { return empty() ? 0.0 : max_y - min_y; }

    void expand(const Vec2& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    void expand(const BBox& o) {
        if (o.empty()) return;
        expand(Vec2{o.min_x, o.min_y});
        expand(Vec2{o.max_x, o.max_y});
    }
    void inflate(double m) {
        if (empty()) return;
        min_x -= m;
        min_y -= m;
        max_x += m;
        max_y += m;
    }
    bool contains(const Vec2& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

// Snap to a 1/64 m lattice. Keeps coordinates exactly representable so that
// rigid translations by dyadic vectors stay bit-exact.
inline double quantize64(double v) { return std::round(v * 64.0) / 64.0; }
inline Vec2 quantize64(const Vec2& v) { return {quantize64(v.x), quantize64(v.y)}; }

}  // namespace roadcmp
