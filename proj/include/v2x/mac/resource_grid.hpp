#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "v2x/engine/event_queue.hpp"

namespace v2x {

enum class Purpose
{
    UplinkData,
    UplinkRetx,
    DownlinkUnicast,
    DownlinkRetx,
    DownlinkMulticast,
    SidelinkMode3,
    SidelinkMode4,
};

const char* to_string(Purpose p) noexcept;

/// Contiguous RB block [first, first + count).
struct RbBlock
{
    int first = 0;
    int count = 0;

    int end() const noexcept { return first + count; }
    int overlap(const RbBlock& o) const noexcept;
};

struct Allocation
{
    RbBlock rbs;
    std::int64_t owner = -1;
    Purpose purpose = Purpose::UplinkData;
};

struct TraceRow
{
    Tti tti = 0;
    std::string carrier;
    int rb = 0;
    std::int64_t owner = -1;
    Purpose purpose = Purpose::UplinkData;
};

/// Lowest-index run of `count` free RBs in an occupancy map.
std::optional<RbBlock> first_fit(const std::vector<char>& occupancy, int count);
/// Length of the longest run of free RBs.
int longest_free_run(const std::vector<char>& occupancy);
void mark(std::vector<char>& occupancy, RbBlock block);

/// Time-frequency resource map of one carrier (one sector direction or the
/// sidelink carrier). One-off allocations are keyed by TTI; semi-persistent
/// allocations recur every `period` TTIs from their start.
///
/// No RB is ever owned twice within a TTI: allocate() throws std::logic_error
/// on a double allocation.
class ResourceGrid
{
public:
    ResourceGrid(std::string carrier, int rbs_per_tti, int period = 100);

    const std::string& carrier() const noexcept { return carrier_; }
    int rbs_per_tti() const noexcept { return rbs_per_tti_; }
    int period() const noexcept { return period_; }

    bool is_free(Tti tti, RbBlock block) const;
    int free_rbs(Tti tti) const;

    /// Lowest-index free block of `count` RBs in `tti`.
    std::optional<RbBlock> find_block(Tti tti, int count) const;

    /// Lowest-index block of `count` RBs free in `tti` and in every later TTI
    /// of the same phase (start + j * period) that is already booked.
    std::optional<RbBlock> find_periodic_block(Tti start, int count) const;

    void allocate(Tti tti, RbBlock block, std::int64_t owner, Purpose purpose);
    /// Reserves `block` at start + j * period for all j >= 0. Returns an id for release.
    int allocate_periodic(Tti start, RbBlock block, std::int64_t owner, Purpose purpose);
    void release_periodic(int id);

    /// One flag per RB, non-zero where the RB is owned in `tti`.
    std::vector<char> occupancy(Tti tti) const;

    /// Every allocation active in `tti`, one-off and periodic.
    std::vector<Allocation> allocations(Tti tti) const;

    /// Drops one-off bookings strictly before `tti`.
    void prune_before(Tti tti);

    void set_trace(std::function<void(const TraceRow&)> sink) { trace_ = std::move(sink); }
    /// Emits one trace row per RB owned in `tti`. No-op without a sink.
    void trace_tti(Tti tti) const;

private:
    struct Periodic
    {
        Tti start = 0;
        Allocation alloc;
        bool active = true;
    };

    bool periodic_active(const Periodic& p, Tti tti) const noexcept;

    std::string carrier_;
    int rbs_per_tti_;
    int period_;
    std::map<Tti, std::vector<Allocation>> one_off_;
    std::vector<Periodic> periodic_;
    std::vector<std::vector<int>> periodic_by_phase_;
    std::function<void(const TraceRow&)> trace_;
};

} // namespace v2x
