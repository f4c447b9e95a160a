#pragma once

#include <array>
#include <deque>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "v2x/mac/scheduler.hpp"
#include "v2x/rat/world.hpp"

namespace v2x {

enum class DownlinkMode
{
    Unicast,
    Embms,
};

/// LTE-Uu path: uplink to the serving sector with HARQ, a fixed forwarding
/// delay to the sectors that serve the receivers, then downlink delivery.
///
/// One uplink feeds any combination of the two downlink variants. Each variant
/// owns its downlink grids, so the variants never load each other.
///
/// Downlink unicast sends one HARQ-protected transport block per receiver,
/// link-adapted on worst-case CSI (every other sector interfering). eMBMS sends
/// the packet once per copy from every sector serving a receiver, in the same
/// TTI and RBs, on the fixed multicast MCS and without feedback; receivers
/// MRC-combine the sector copies and the blind repetitions. Multicast is
/// scheduled before unicast, first copies before repetitions.
class UuLeg
{
public:
    static constexpr std::uint64_t kUplinkCode = 2;
    static constexpr std::uint64_t kUnicastCode = 3;
    static constexpr std::uint64_t kEmbmsCode = 4;

    UuLeg(World& world, bool unicast, bool embms);

    void on_packet(std::int64_t id);
    /// Downlink scheduling of TTI `t`. Runs before on_tti(t).
    void schedule_tti(Tti t);
    /// Air interface of TTI `t`, uplink and downlink.
    void on_tti(Tti t);
    void trace_tti(Tti t);

    bool has(DownlinkMode mode) const noexcept;
    const std::vector<std::vector<LegOutcome>>& outcomes(DownlinkMode mode) const;

    int embms_rbs() const noexcept { return embms_rbs_; }

private:
    static constexpr int kSectors = SectorSite::kSectors;

    struct UlTx
    {
        std::int64_t packet = 0;
        UeId ue = 0;
        int sector = 0;
        RbBlock rbs;
        const McsEntry* mcs = nullptr;
    };
    struct UlSps
    {
        Grant grant;
        int sector = 0;
        const McsEntry* mcs = nullptr;
    };
    struct UlState
    {
        ReceptionState reception;
        HarqProcess harq;
    };

    struct UnicastJob
    {
        std::int64_t packet = 0;
        std::size_t rx_index = 0;
        Tti eligible = 0;
        Tti deadline = 0;
        const McsEntry* mcs = nullptr;
        int rbs = 0;
    };
    struct EmbmsJob
    {
        std::int64_t packet = 0;
        unsigned mask = 0; // bit s set when sector s serves a receiver
        Tti eligible = 0;
        Tti deadline = 0;
        int sent = 0;
        Tti last = -1;
    };
    struct DlTx
    {
        int sector = 0;
        RbBlock rbs;
        std::int64_t packet = 0;
        std::size_t rx_index = 0; // unicast only
        unsigned mask = 0;        // eMBMS only
        const McsEntry* mcs = nullptr;
        bool embms = false;
    };
    struct DlState
    {
        ReceptionState reception;
        HarqProcess harq;
    };

    struct Downlink
    {
        DownlinkMode mode;
        std::vector<ResourceGrid> grids;
        std::array<std::list<UnicastJob>, kSectors> unicast;
        std::list<EmbmsJob> embms;
        std::map<Tti, std::vector<DlTx>> air;
        std::vector<std::vector<LegOutcome>> outcomes;
        std::unordered_map<std::int64_t, std::vector<DlState>> states;
    };

    const McsEntry& uplink_mcs(UeId ue, int sector) const;
    void request_uplink(std::int64_t id);
    void configure_sps(std::int64_t id, int sector, const McsEntry& mcs, int rbs);
    void uplink_air(Tti t);
    void on_bs_arrival(std::int64_t id);
    void schedule_embms(Downlink& dl, Tti t);
    void schedule_unicast(Downlink& dl, Tti t);
    void downlink_air(Downlink& dl, Tti t);
    void expire(Tti t);

    World& w_;
    std::vector<ResourceGrid> ul_grids_;
    std::unordered_map<UeId, UlSps> ul_sps_;
    std::map<Tti, std::vector<UlTx>> ul_air_;
    std::unordered_map<std::int64_t, UlState> ul_states_;
    std::vector<Downlink> downlinks_;
    const McsEntry* embms_mcs_;
    int embms_rbs_;
    int min_unicast_rbs_;
    int max_offset_;
    std::deque<std::pair<Tti, std::int64_t>> expiry_;
};

} // namespace v2x
