#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "v2x/mac/scheduler.hpp"
#include "v2x/rat/world.hpp"

namespace v2x {

/// Direct multicast over the PC5 sidelink.
///
/// Every packet goes out as up to `pc5_repetitions` identical copies on the
/// fixed sidelink MCS, in distinct TTIs and without feedback. Mode 3 takes its
/// resources from the BS, always collision-free: the first copy through a
/// dynamic request or a semi-persistent grant, the repetitions from whatever
/// the BS has left over once it knows the first copies of a TTI (one grant
/// lead ahead), so repetitions never displace another vehicle's first copy.
/// Mode 4 picks every copy at random from the pool, collisions included. Receivers MRC-combine the copies they hear and try to decode after
/// each one. A vehicle that transmits in a TTI hears nothing in it.
class Pc5Leg
{
public:
    static constexpr std::uint64_t kLegCode = 1;

    explicit Pc5Leg(World& world);

    int rb_need() const noexcept { return rb_need_; }
    const McsEntry& mcs() const noexcept { return *mcs_; }

    /// Called when packet `id` is generated; id indexes World::packets.
    void on_packet(std::int64_t id);
    /// Mode 3 repetition grants for TTI t + grant_to_data, after the events of `t`.
    void schedule_tti(Tti t);
    /// Air interface of TTI `t`: all sidelink copies sent in `t` are received.
    void on_tti(Tti t);
    void trace_tti(Tti t);

    /// Indexed by packet id, then by receiver position in Packet::rx.
    const std::vector<std::vector<LegOutcome>>& outcomes() const noexcept { return outcomes_; }

    const ResourceGrid& grid() const noexcept { return grid_; }

private:
    struct Tx
    {
        std::int64_t packet = 0;
        UeId ue = 0;
        RbBlock rbs;
    };
    void request_mode3(std::int64_t id);
    void configure_sps(std::int64_t id);
    void queue(Tti t, Tx tx);
    /// Records a scheduled mode 3 copy and, for a first copy, asks for repetitions.
    void add_copy(std::int64_t id, Tti t, RbBlock rbs);
    void expire(Tti t);

    World& w_;
    const McsEntry* mcs_;
    int rb_need_;
    int max_offset_;
    ResourceGrid grid_;
    SidelinkPool pool_;
    RngStream mode4_rng_;
    std::unordered_map<UeId, Grant> sps_;
    std::set<std::pair<Tti, std::int64_t>> repeat_;            // (deadline, packet) still short of copies
    std::unordered_map<std::int64_t, std::vector<Tti>> copies_; // TTIs already holding a copy
    std::map<Tti, std::vector<Tx>> air_;
    std::vector<std::vector<LegOutcome>> outcomes_;
    std::unordered_map<std::int64_t, std::vector<ReceptionState>> states_;
    std::deque<std::pair<Tti, std::int64_t>> expiry_;
};

} // namespace v2x
