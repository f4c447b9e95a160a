#pragma once

#include <cmath>

namespace v2x {

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double k) { return {a.x * k, a.y * k}; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v)
{
    return std::hypot(v.x, v.y);
}

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect
{
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
    Rect shifted(double dx, double dy) const { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }
};

/// True iff the closed segment a-b has a point strictly inside the open
/// rectangle. Touching an edge or a corner does not count.
bool segment_crosses_interior(Vec2 a, Vec2 b, const Rect& r);

/// True iff the interiors of two rectangles overlap.
bool interiors_overlap(const Rect& a, const Rect& b);

} // namespace v2x
