#include "v2x/environment/madrid_grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace v2x {

Direction opposite(Direction d) noexcept
{
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

Vec2 unit_vector(Direction d) noexcept
{
    switch (d) {
    case Direction::East: return {1.0, 0.0};
    case Direction::North: return {0.0, 1.0};
    case Direction::West: return {-1.0, 0.0};
    case Direction::South: return {0.0, -1.0};
    }
    return {};
}

namespace {

int wrap_index(int i, int n)
{
    const int r = i % n;
    return r < 0 ? r + n : r;
}

double wrap_coord(double v, double n)
{
    double r = std::fmod(v, n);
    if (r < 0.0)
        r += n;
    // fmod can return n for tiny negative inputs after the shift.
    return r >= n ? 0.0 : r;
}

double min_image(double d, double n)
{
    d = std::fmod(d, n);
    if (d > n / 2)
        d -= n;
    else if (d < -n / 2)
        d += n;
    return d;
}

} // namespace

MadridGrid::MadridGrid(const GridParams& p) : params_(p)
{
    if (p.blocks_x < 1 || p.blocks_y < 1 || p.cells_x < 1 || p.cells_y < 1)
        throw ConfigError("grid counts must be >= 1");
    if (!(p.building_size > 0.0))
        throw ConfigError("geometry.building_size must be positive");
    if (!(p.street_width > 0.0))
        throw ConfigError("geometry.street_width must be positive; footprints would overlap");
    if (p.park_cell_x < 0 || p.park_cell_x >= p.cells_x || p.park_cell_y < 0 || p.park_cell_y >= p.cells_y)
        throw ConfigError("geometry.park_cell lies outside the block");

    pitch_ = p.building_size + p.street_width;
    nx_ = p.blocks_x * p.cells_x;
    ny_ = p.blocks_y * p.cells_y;
    width_ = pitch_ * nx_;
    height_ = pitch_ * ny_;

    cell_building_.assign(static_cast<std::size_t>(nx_ * ny_), -1);
    const double inset = p.street_width / 2;
    for (int cj = 0; cj < ny_; ++cj) {
        for (int ci = 0; ci < nx_; ++ci) {
            const Rect fp{ci * pitch_ + inset, cj * pitch_ + inset, ci * pitch_ + inset + p.building_size,
                          cj * pitch_ + inset + p.building_size};
            const bool park = (ci % p.cells_x) == p.park_cell_x && (cj % p.cells_y) == p.park_cell_y;
            if (park) {
                parks_.push_back(fp);
            } else {
                cell_building_[static_cast<std::size_t>(cj * nx_ + ci)] = static_cast<int>(buildings_.size());
                buildings_.push_back(Building{fp, p.building_height});
            }
        }
    }
}

int MadridGrid::node_at(int i, int j) const noexcept
{
    return wrap_index(j, ny_) * nx_ + wrap_index(i, nx_);
}

Vec2 MadridGrid::node_position(int node) const noexcept
{
    return {(node % nx_) * pitch_, (node / nx_) * pitch_};
}

int MadridGrid::neighbor(int node, Direction d) const noexcept
{
    const int i = node % nx_;
    const int j = node / nx_;
    switch (d) {
    case Direction::East: return node_at(i + 1, j);
    case Direction::North: return node_at(i, j + 1);
    case Direction::West: return node_at(i - 1, j);
    case Direction::South: return node_at(i, j - 1);
    }
    return node;
}

std::vector<StreetSegment> MadridGrid::streets() const
{
    std::vector<StreetSegment> out;
    out.reserve(static_cast<std::size_t>(2 * node_count()));
    for (int n = 0; n < node_count(); ++n) {
        out.push_back({n, neighbor(n, Direction::East), Direction::East});
        out.push_back({n, neighbor(n, Direction::North), Direction::North});
    }
    return out;
}

double MadridGrid::total_street_length() const noexcept
{
    return 2.0 * node_count() * pitch_;
}

Vec2 MadridGrid::wrap(Vec2 p) const noexcept
{
    return {wrap_coord(p.x, width_), wrap_coord(p.y, height_)};
}

Vec2 MadridGrid::displacement(Vec2 a, Vec2 b) const noexcept
{
    return {min_image(b.x - a.x, width_), min_image(b.y - a.y, height_)};
}

double MadridGrid::distance(Vec2 a, Vec2 b) const noexcept
{
    return norm(displacement(a, b));
}

bool MadridGrid::on_street(Vec2 p, double tolerance) const noexcept
{
    const Vec2 w = wrap(p);
    auto near_line = [&](double v) {
        const double r = std::fmod(v, pitch_);
        return r <= tolerance || pitch_ - r <= tolerance;
    };
    return near_line(w.x) || near_line(w.y);
}

const Building& MadridGrid::central_building() const
{
    if (buildings_.empty())
        throw std::logic_error("grid has no buildings");
    const Vec2 c{width_ / 2, height_ / 2};
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < buildings_.size(); ++i) {
        const double d = norm(buildings_[i].footprint.center() - c);
        if (d < best_d - 1e-9) {
            best_d = d;
            best = i;
        }
    }
    return buildings_[best];
}

std::optional<int> MadridGrid::building_in_cell(int ci, int cj) const noexcept
{
    const int b = cell_building_[static_cast<std::size_t>(wrap_index(cj, ny_) * nx_ + wrap_index(ci, nx_))];
    if (b < 0)
        return std::nullopt;
    return b;
}

LinkClass MadridGrid::classify_los(Vec2 tx, Vec2 rx) const
{
    const Vec2 a = wrap(tx);
    const Vec2 b = a + displacement(a, rx);
    // Only cells overlapped by the segment's bounding box can block it.
    const int i0 = static_cast<int>(std::floor(std::min(a.x, b.x) / pitch_));
    const int i1 = static_cast<int>(std::floor(std::max(a.x, b.x) / pitch_));
    const int j0 = static_cast<int>(std::floor(std::min(a.y, b.y) / pitch_));
    const int j1 = static_cast<int>(std::floor(std::max(a.y, b.y) / pitch_));
    for (int cj = j0; cj <= j1; ++cj) {
        for (int ci = i0; ci <= i1; ++ci) {
            const auto idx = building_in_cell(ci, cj);
            if (!idx)
                continue;
            // Shift the stored footprint to the unwrapped cell position.
            const Rect& fp = buildings_[static_cast<std::size_t>(*idx)].footprint;
            const double dx = ci * pitch_ - std::floor(fp.x0 / pitch_) * pitch_;
            const double dy = cj * pitch_ - std::floor(fp.y0 / pitch_) * pitch_;
            if (segment_crosses_interior(a, b, fp.shifted(dx, dy)))
                return LinkClass::Nlos;
        }
    }
    return LinkClass::Los;
}

MadridGrid build_grid(int blocks_x, int blocks_y, GridParams params)
{
    if (blocks_x < 1 || blocks_y < 1)
        throw ConfigError("block counts must be >= 1");
    params.blocks_x = blocks_x;
    params.blocks_y = blocks_y;
    return MadridGrid(params);
}

} // namespace v2x
