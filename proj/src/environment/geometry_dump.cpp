#include "v2x/environment/geometry_dump.hpp"

namespace v2x {

nlohmann::json geometry_json(const MadridGrid& grid, const SectorSite& site)
{
    using nlohmann::json;
    json j;
    j["width"] = grid.width();
    j["height"] = grid.height();
    json buildings = json::array();
    for (const auto& b : grid.buildings()) {
        buildings.push_back({{"x0", b.footprint.x0},
                             {"y0", b.footprint.y0},
                             {"x1", b.footprint.x1},
                             {"y1", b.footprint.y1},
                             {"height", b.height}});
    }
    j["buildings"] = buildings;
    json parks = json::array();
    for (const auto& p : grid.parks())
        parks.push_back({{"x0", p.x0}, {"y0", p.y0}, {"x1", p.x1}, {"y1", p.y1}});
    j["parks"] = parks;
    json streets = json::array();
    for (const auto& s : grid.streets()) {
        const Vec2 a = grid.node_position(s.from);
        // Segments that wrap around are drawn up to the plane edge.
        const Vec2 b = a + unit_vector(s.direction) * grid.pitch();
        streets.push_back({a.x, a.y, b.x, b.y});
    }
    j["streets"] = streets;
    j["site"] = {{"x", site.position.x},
                 {"y", site.position.y},
                 {"height", site.antenna_height},
                 {"azimuths_deg", site.azimuths_deg}};
    return j;
}

} // namespace v2x
