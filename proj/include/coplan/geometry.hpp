#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace coplan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }

    /// Clips the vector to a maximum length, preserving direction.
    Vec2 clipped(double max_len) const {
        const double n = norm();
        return n > max_len ? *this * (max_len / n) : *this;
    }
};

using Point = Vec2;

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

/// Axis-aligned rectangle with closed boundary.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    Rect() = default;
    Rect(double x0_, double y0_, double x1_, double y1_)
        : x0(std::min(x0_, x1_)), y0(std::min(y0_, y1_)), x1(std::max(x0_, x1_)), y1(std::max(y0_, y1_)) {}

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Point center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }

    bool contains(const Point& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool contains_rect(const Rect& r) const { return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1; }
    bool overlaps(const Rect& r) const { return r.x0 <= x1 && r.x1 >= x0 && r.y0 <= y1 && r.y1 >= y0; }
};

/// Earliest parameter t in [0,1] at which segment a+t(b-a) touches the closed
/// rectangle, or nullopt if the segment misses it. Slab clipping; a degenerate
/// segment hits iff the point is inside.
inline std::optional<double> segment_rect_entry(const Point& a, const Point& b, const Rect& r) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    double t_lo = 0.0;
    double t_hi = 1.0;

    const auto clip_axis = [&](double p, double d, double lo, double hi) {
        constexpr double kParallelEps = 1e-15;
        if (std::abs(d) < kParallelEps) return p >= lo && p <= hi;
        double t0 = (lo - p) / d;
        double t1 = (hi - p) / d;
        if (t0 > t1) std::swap(t0, t1);
        t_lo = std::max(t_lo, t0);
        t_hi = std::min(t_hi, t1);
        return t_lo <= t_hi;
    };

    if (!clip_axis(a.x, dx, r.x0, r.x1)) return std::nullopt;
    if (!clip_axis(a.y, dy, r.y0, r.y1)) return std::nullopt;
    if (t_lo > t_hi) return std::nullopt;
    return t_lo;
}

inline bool segment_intersects_rect(const Point& a, const Point& b, const Rect& r) {
    return segment_rect_entry(a, b, r).has_value();
}

}  // namespace coplan
