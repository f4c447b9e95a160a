#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "v2x/engine/rng.hpp"
#include "v2x/engine/scenario.hpp"
#include "v2x/mac/resource_grid.hpp"

namespace v2x {

/// Timing of a dynamic request: scheduling request, grant (after BS
/// processing) and the earliest TTI the grant may point at.
struct DelayChain
{
    Tti sr = 0;
    Tti grant = 0;
    Tti earliest_data = 0;
};

/// First SR opportunity at or after `t`. UE `ue` owns the opportunities
/// t' with t' = ue (mod sr_period).
Tti next_sr_opportunity(Tti t, std::int64_t ue, int sr_period);

DelayChain dynamic_chain(Tti t, std::int64_t ue, const MacParams& mac);

enum class GrantKind
{
    Dynamic,
    Sps,
};

struct Grant
{
    GrantKind kind = GrantKind::Dynamic;
    RbBlock rbs;
    Tti start = 0;
    int period = 0; // SPS only
    std::int64_t owner = -1;
    int reservation = -1; // periodic reservation id on the grid, SPS only

    /// First occurrence at or after `t` (SPS), or `start` (dynamic).
    Tti occurrence_at_or_after(Tti t) const;
};

/// One-off grant in the first TTI of [earliest, deadline] that has a free block
/// of `rbs` RBs. Requests are served in the order they are made, so a later
/// request that finds the TTI full is pushed to a later TTI.
std::optional<Grant> schedule_dynamic(ResourceGrid& grid, Tti earliest, Tti deadline, int rbs, std::int64_t owner,
                                      Purpose purpose);

/// Semi-persistent grant. Occurrences are anchor + d + j * period for the
/// smallest offset d in [min_offset, max_offset] at which a block stays free
/// for every occurrence. Returns nullopt on admission failure.
std::optional<Grant> sps_configure(ResourceGrid& grid, Tti anchor, int min_offset, int max_offset, int rbs,
                                   std::int64_t owner, Purpose purpose);

/// Network-scheduled sidelink (mode 3): `copies` one-off blocks in distinct
/// TTIs, the first as early as possible, the others only where resources are
/// left before the deadline. Empty when not even the first copy fits.
std::vector<Grant> mode3_request(ResourceGrid& grid, Tti earliest, Tti deadline, int rbs, int copies,
                                 std::int64_t owner);

/// RB subset of the sidelink carrier open to autonomous selection. It is cut
/// into subchannels of the transport-block size.
struct SidelinkPool
{
    int first_rb = 0;
    int rbs = 50;

    int subchannels(int rb_need) const noexcept { return rb_need > 0 ? rbs / rb_need : 0; }
    RbBlock subchannel(int index, int rb_need) const noexcept { return {first_rb + index * rb_need, rb_need}; }
};

struct Mode4Choice
{
    Tti tti = 0;
    RbBlock rbs;
};

/// Autonomous selection (mode 4): each copy draws uniformly one of the
/// window * subchannels candidate slots in [window_start, window_start + window),
/// with all copies in distinct TTIs. No sensing, so two UEs may pick the same
/// slot. Empty when the pool has no subchannel of `rb_need` RBs or the window
/// holds fewer TTIs than copies.
std::vector<Mode4Choice> mode4_select(const SidelinkPool& pool, int rb_need, Tti window_start, int window, int copies,
                                      RngStream& rng);

} // namespace v2x
