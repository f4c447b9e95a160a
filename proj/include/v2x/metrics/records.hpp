#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "v2x/engine/scenario.hpp"
#include "v2x/environment/deployment.hpp"

namespace v2x {

enum class Winner
{
    None,
    Pc5,
    Uu,
};

std::string_view to_string(Winner w) noexcept;
Winner parse_winner(std::string_view s);

/// Outcome of one (packet, relevant receiver) pair under one scheme.
///
/// The latency and its breakdown are present only for deliveries. Uu
/// deliveries carry ul + core + dl = latency; sidelink deliveries carry no
/// breakdown. The winner is set for multi-RAT schemes only.
struct DeliveryRecord
{
    std::int64_t packet_id = 0;
    UeId tx = 0;
    UeId rx = 0;
    Scheme scheme = Scheme::Pc5;
    bool delivered = false;
    std::optional<std::int64_t> latency_ms;
    std::optional<std::int64_t> ul_ms;
    std::optional<std::int64_t> core_ms;
    std::optional<std::int64_t> dl_ms;
    std::optional<Winner> winner;
    double distance_m = 0.0;

    friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

struct RelevantRx
{
    UeId id = 0;
    double distance = 0.0;
};

/// Every vehicle other than `tx` within `range` (inclusive) of it, ascending id.
std::vector<RelevantRx> relevant_rx_set(UeId tx, const std::vector<Ue>& ues, const MadridGrid& grid, double range);

} // namespace v2x
