#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "v2x/engine/scenario.hpp"
#include "v2x/metrics/statistics.hpp"

namespace v2x {

struct SweepOutcome
{
    std::vector<PrrPoint> points; // ordered by seed, range, scheme
    int simulations = 0;          // runs executed over all seeds
};

/// PRR per (range, scheme, seed). The sidelink-only scheme is simulated once
/// per seed at the largest range and re-scored per range, because relevance
/// only filters its receivers. Schemes with a Uu leg are simulated per range:
/// the range sets the downlink load. Seeds run on up to `jobs` threads.
SweepOutcome sweep_ranges(const Scenario& base, const std::vector<Scheme>& schemes, const std::vector<double>& ranges,
                          const std::vector<std::uint64_t>& seeds, int jobs = 1);

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads. Exceptions are
/// rethrown in the caller (the first by index).
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

} // namespace v2x
