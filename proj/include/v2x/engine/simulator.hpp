#pragma once

#include <cstdint>
#include <vector>

#include "v2x/engine/scenario.hpp"
#include "v2x/metrics/records.hpp"
#include "v2x/rat/world.hpp"

namespace v2x {

struct RunResult
{
    /// Grouped by scheme in request order, then by packet id and receiver id.
    std::vector<DeliveryRecord> records;
    RunLog log;
    std::size_t vehicles = 0;
    std::int64_t packets_generated = 0;
    std::int64_t packets_scored = 0; // generated in [warmup, duration)
};

/// Simulates `scenario.scheme` with `scenario.seed` as master seed.
RunResult run(const Scenario& scenario);

/// Simulates several schemes over one drop and one mobility trace. The legs
/// are independent pipelines, so each scheme's records equal those of a
/// run with that scheme alone.
RunResult run(const Scenario& scenario, const std::vector<Scheme>& schemes);

} // namespace v2x
