#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "v2x/engine/rng.hpp"
#include "v2x/environment/madrid_grid.hpp"

namespace v2x {

using UeId = std::int32_t;

/// Three-sector macro site on the roof of the central building.
struct SectorSite
{
    static constexpr int kSectors = 3;

    Vec2 position;
    double antenna_height = 25.0;
    std::array<double, kSectors> azimuths_deg{0.0, 120.0, 240.0};
};

SectorSite make_site(const MadridGrid& grid, double antenna_height);

/// Vehicle. Moves along street centrelines; `offset` is the distance travelled
/// from node `from` towards its neighbour in `direction`.
struct Ue
{
    UeId id = 0;
    int from = 0;
    Direction direction = Direction::East;
    double offset = 0.0;
    double speed_mps = 0.0;
    Vec2 position;
    double antenna_height = 1.5;
    int serving_sector = 0;

    double speed_kmh() const { return speed_mps * 3.6; }
    Vec2 heading() const { return unit_vector(direction); }
};

/// Drops Poisson(density * area) vehicles uniformly over the street length,
/// speeds uniform in (0, max_speed_kmh].
std::vector<Ue> drop_vehicles(const MadridGrid& grid, double density_per_km2, RngStream& rng,
                              double max_speed_kmh = 50.0, double antenna_height = 1.5);

/// Advances every vehicle by speed * dt. At intersections the next street is
/// drawn uniformly among the continuations other than a U-turn.
void step_mobility(std::vector<Ue>& ues, std::int64_t dt_ms, const MadridGrid& grid, RngStream& rng);

} // namespace v2x
