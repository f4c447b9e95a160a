#include "v2x/multirat/merge.hpp"

namespace v2x {

DualOutcome merge_outcomes(std::optional<std::int64_t> pc5_latency, std::optional<std::int64_t> uu_latency,
                           std::int64_t latency_bound)
{
    DualOutcome out;
    if (pc5_latency && *pc5_latency <= latency_bound)
        out.pc5_latency = pc5_latency;
    if (uu_latency && *uu_latency <= latency_bound)
        out.uu_latency = uu_latency;
    if (out.pc5_latency && (!out.uu_latency || *out.pc5_latency <= *out.uu_latency)) {
        out.delivered = true;
        out.latency = *out.pc5_latency;
        out.winner = Winner::Pc5;
    } else if (out.uu_latency) {
        out.delivered = true;
        out.latency = *out.uu_latency;
        out.winner = Winner::Uu;
    }
    return out;
}

} // namespace v2x
