#include "v2x/metrics/records.hpp"

#include <stdexcept>
#include <string>

namespace v2x {

std::string_view to_string(Winner w) noexcept
{
    switch (w) {
    case Winner::None: return "none";
    case Winner::Pc5: return "pc5";
    case Winner::Uu: return "uu";
    }
    return "none";
}

Winner parse_winner(std::string_view s)
{
    if (s == "none")
        return Winner::None;
    if (s == "pc5")
        return Winner::Pc5;
    if (s == "uu")
        return Winner::Uu;
    throw std::invalid_argument("unknown winner '" + std::string(s) + "'");
}

std::vector<RelevantRx> relevant_rx_set(UeId tx, const std::vector<Ue>& ues, const MadridGrid& grid, double range)
{
    std::vector<RelevantRx> out;
    const Vec2 origin = ues.at(static_cast<std::size_t>(tx)).position;
    for (const auto& ue : ues) {
        if (ue.id == tx)
            continue;
        const double d = grid.distance(origin, ue.position);
        if (d <= range)
            out.push_back({ue.id, d});
    }
    return out;
}

} // namespace v2x
