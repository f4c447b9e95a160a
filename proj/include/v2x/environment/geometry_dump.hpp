#pragma once

#include <json.hpp>

#include "v2x/environment/deployment.hpp"

namespace v2x {

/// Plot-ready description of the layout: plane size, building footprints,
/// parks, street centrelines and the sector site.
///
/// {"width", "height", "buildings": [{"x0","y0","x1","y1","height"}],
///  "parks": [{"x0","y0","x1","y1"}], "streets": [[x0, y0, x1, y1]],
///  "site": {"x", "y", "height", "azimuths_deg"}}
nlohmann::json geometry_json(const MadridGrid& grid, const SectorSite& site);

} // namespace v2x
