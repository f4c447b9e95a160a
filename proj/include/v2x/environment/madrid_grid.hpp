#pragma once

#include <array>
#include <optional>
#include <vector>

#include "v2x/engine/scenario.hpp"
#include "v2x/environment/geometry.hpp"

namespace v2x {

struct Building
{
    Rect footprint;
    double height = 0.0;
};

enum class Direction
{
    East = 0,
    North = 1,
    West = 2,
    South = 3,
};

Direction opposite(Direction d) noexcept;
Vec2 unit_vector(Direction d) noexcept;

/// Street centreline between two neighbouring intersections.
struct StreetSegment
{
    int from = 0;
    int to = 0;
    Direction direction = Direction::East;
};

enum class LinkClass
{
    Los,
    Nlos,
};

/// Block-based dense urban layout on a wrap-around (torus) plane.
///
/// The plane is a lattice of square cells of side `building_size + street_width`.
/// Street centrelines run along the cell borders at x = i*pitch and y = j*pitch,
/// so every cell holds one footprint inset by half a street width. Each block
/// of `cells_x * cells_y` cells turns one cell into a park: non-drivable and
/// not obstructing radio propagation.
class MadridGrid
{
public:
    explicit MadridGrid(const GridParams& params);

    const GridParams& params() const noexcept { return params_; }
    double pitch() const noexcept { return pitch_; }
    double width() const noexcept { return width_; }
    double height() const noexcept { return height_; }
    double area_km2() const noexcept { return width_ * height_ * 1e-6; }

    const std::vector<Building>& buildings() const noexcept { return buildings_; }
    const std::vector<Rect>& parks() const noexcept { return parks_; }

    int columns() const noexcept { return nx_; }
    int rows() const noexcept { return ny_; }
    int node_count() const noexcept { return nx_ * ny_; }
    int node_at(int i, int j) const noexcept;
    Vec2 node_position(int node) const noexcept;
    int neighbor(int node, Direction d) const noexcept;

    /// Every street segment once, east- and north-bound.
    std::vector<StreetSegment> streets() const;
    double total_street_length() const noexcept;

    /// Wraps a point into [0, width) x [0, height).
    Vec2 wrap(Vec2 p) const noexcept;
    /// Shortest displacement from a to b on the torus.
    Vec2 displacement(Vec2 a, Vec2 b) const noexcept;
    double distance(Vec2 a, Vec2 b) const noexcept;

    /// True iff the point lies on a street centreline within `tolerance` metres.
    bool on_street(Vec2 p, double tolerance = 1e-6) const noexcept;

    /// Building whose centre is closest to the centre of the plane.
    const Building& central_building() const;

    /// NLOS iff the shortest tx->rx segment crosses a building footprint interior.
    LinkClass classify_los(Vec2 tx, Vec2 rx) const;

private:
    std::optional<int> building_in_cell(int ci, int cj) const noexcept;

    GridParams params_;
    double pitch_ = 0.0;
    double width_ = 0.0;
    double height_ = 0.0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<Building> buildings_;
    std::vector<Rect> parks_;
    std::vector<int> cell_building_; // -1 for park cells
};

/// Builds `blocks_x * blocks_y` replicated blocks. Throws ConfigError for
/// counts < 1 or parameters that make footprints overlap.
MadridGrid build_grid(int blocks_x, int blocks_y, GridParams params);

} // namespace v2x
