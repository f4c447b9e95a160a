#pragma once

#include <cstdint>
#include <optional>

#include "v2x/metrics/records.hpp"

namespace v2x {

/// Per-receiver union of the two legs of a duplicated packet.
struct DualOutcome
{
    std::optional<std::int64_t> pc5_latency; // set when the sidelink leg delivered within the bound
    std::optional<std::int64_t> uu_latency;
    bool delivered = false;
    std::int64_t latency = 0;
    Winner winner = Winner::None;
};

/// Delivered iff either leg delivered within `latency_bound`; the latency is
/// the smaller one. A tie goes to PC5, the leg that does not load the network.
DualOutcome merge_outcomes(std::optional<std::int64_t> pc5_latency, std::optional<std::int64_t> uu_latency,
                           std::int64_t latency_bound);

} // namespace v2x
