#include "v2x/environment/geometry.hpp"

#include <algorithm>
#include <limits>

namespace v2x {

namespace {

// Open parameter interval (lo, hi) where p + t*d lies strictly inside (a, b).
// Returns false when the interval is empty.
bool open_slab(double p, double d, double a, double b, double& lo, double& hi)
{
    if (d == 0.0) {
        if (p > a && p < b) {
            lo = -std::numeric_limits<double>::infinity();
            hi = std::numeric_limits<double>::infinity();
            return true;
        }
        return false;
    }
    double t0 = (a - p) / d;
    double t1 = (b - p) / d;
    if (t0 > t1)
        std::swap(t0, t1);
    lo = t0;
    hi = t1;
    return true;
}

} // namespace

bool segment_crosses_interior(Vec2 a, Vec2 b, const Rect& r)
{
    const Vec2 d = b - a;
    double xlo, xhi, ylo, yhi;
    if (!open_slab(a.x, d.x, r.x0, r.x1, xlo, xhi))
        return false;
    if (!open_slab(a.y, d.y, r.y0, r.y1, ylo, yhi))
        return false;
    // (lo, hi) is open, the segment range [0, 1] closed.
    const double lo = std::max(xlo, ylo);
    const double hi = std::min(xhi, yhi);
    return lo < hi && lo < 1.0 && hi > 0.0;
}

bool interiors_overlap(const Rect& a, const Rect& b)
{
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

} // namespace v2x
