#include "v2x/environment/deployment.hpp"

#include <stdexcept>

namespace v2x {

namespace {

void place(Ue& ue, const MadridGrid& grid)
{
    ue.position = grid.wrap(grid.node_position(ue.from) + unit_vector(ue.direction) * ue.offset);
}

} // namespace

SectorSite make_site(const MadridGrid& grid, double antenna_height)
{
    SectorSite site;
    site.position = grid.central_building().footprint.center();
    site.antenna_height = antenna_height;
    return site;
}

std::vector<Ue> drop_vehicles(const MadridGrid& grid, double density_per_km2, RngStream& rng,
                              double max_speed_kmh, double antenna_height)
{
    if (!(density_per_km2 > 0.0))
        throw std::invalid_argument("density must be positive");
    const auto count = rng.poisson(density_per_km2 * grid.area_km2());
    const auto streets = grid.streets();
    std::vector<Ue> ues;
    ues.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        Ue ue;
        ue.id = static_cast<UeId>(k);
        // Segments all have the same length, so a uniform segment index and a
        // uniform offset give a uniform position over the street length.
        const auto& seg = streets[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(streets.size()) - 1))];
        const bool reverse = rng.uniform() < 0.5;
        const double along = rng.uniform(0.0, grid.pitch());
        if (reverse) {
            ue.from = seg.to;
            ue.direction = opposite(seg.direction);
            ue.offset = grid.pitch() - along;
            if (ue.offset >= grid.pitch())
                ue.offset = 0.0;
        } else {
            ue.from = seg.from;
            ue.direction = seg.direction;
            ue.offset = along;
        }
        ue.speed_mps = max_speed_kmh * (1.0 - rng.uniform()) / 3.6;
        ue.antenna_height = antenna_height;
        place(ue, grid);
        ues.push_back(ue);
    }
    return ues;
}

void step_mobility(std::vector<Ue>& ues, std::int64_t dt_ms, const MadridGrid& grid, RngStream& rng)
{
    if (dt_ms <= 0)
        throw std::invalid_argument("mobility step must be positive");
    const double pitch = grid.pitch();
    for (auto& ue : ues) {
        double remaining = ue.speed_mps * static_cast<double>(dt_ms) / 1000.0;
        while (ue.offset + remaining >= pitch) {
            remaining -= pitch - ue.offset;
            ue.from = grid.neighbor(ue.from, ue.direction);
            ue.offset = 0.0;
            // Continuations: straight, left, right. Never back.
            const Direction back = opposite(ue.direction);
            std::array<Direction, 3> options{};
            int n = 0;
            for (int d = 0; d < 4; ++d) {
                if (static_cast<Direction>(d) != back)
                    options[static_cast<std::size_t>(n++)] = static_cast<Direction>(d);
            }
            ue.direction = options[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
        }
        ue.offset += remaining;
        place(ue, grid);
    }
}

} // namespace v2x
