#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "v2x/channel/radio_channel.hpp"
#include "v2x/engine/event_queue.hpp"
#include "v2x/engine/rng.hpp"
#include "v2x/engine/scenario.hpp"
#include "v2x/environment/deployment.hpp"
#include "v2x/mac/resource_grid.hpp"
#include "v2x/phy/mcs.hpp"
#include "v2x/phy/reception.hpp"

namespace v2x {

/// One generated message and the receivers it is meant for.
struct Packet
{
    std::int64_t id = 0;
    UeId tx = 0;
    Tti generated = 0;
    std::vector<UeId> rx;          // relevant receivers, ascending id
    std::vector<double> distance;  // tx-rx distance at generation, parallel to rx
};

/// Result of one RAT leg for one (packet, receiver) pair.
struct LegOutcome
{
    bool delivered = false;
    Tti delivery = 0; // end of the decoding TTI
    Tti ul_done = -1; // Uu only: end of the successful uplink attempt
};

struct HarqAttempt
{
    std::string leg;
    std::int64_t process = 0; // packet id for uplink, packet id * 2^20 + rx for downlink
    int attempt = 0;          // 1-based
    Tti start = 0;
    Tti end = 0;
    bool ack = false;
};

struct SrEvent
{
    std::string leg;
    UeId ue = 0;
    Tti tti = 0;
};

struct SpsEvent
{
    std::string leg;
    UeId ue = 0;
    Tti tti = 0;
};

struct RunLog
{
    std::vector<HarqAttempt> harq;
    std::vector<SrEvent> sr;
    std::vector<SpsEvent> sps_configured; // TTI at which the BS configured the grant
    std::vector<SpsEvent> sps_used;       // occurrences carrying a packet
    std::vector<TraceRow> trace;
    std::uint64_t mac_drops = 0;          // packets that found no resource before the deadline
    std::uint64_t mode4_collisions = 0;   // pairs of overlapping mode-4 transmissions
    std::uint64_t pathloss_clamps = 0;
};

/// State shared by the RAT pipelines of one run.
struct World
{
    World(const Scenario& scenario, std::uint64_t master_seed);

    const Scenario& sc;
    std::uint64_t master;
    MadridGrid grid;
    SectorSite site;
    std::vector<Ue> ues;
    RngStream mobility_rng;
    RadioChannel channel;
    McsTable mcs;
    BlerMapping bler;
    std::uint64_t bler_seed;
    EventQueue events;
    std::vector<Packet> packets;
    RunLog log;

    /// Last TTI in which a transmission of `p` can still be delivered within
    /// the latency bound (delivery happens at the end of the TTI).
    Tti deadline(const Packet& p) const { return p.generated + sc.latency_bound - 1; }

    /// Uniform draw for a curve-model decode, keyed by the attempt so that it
    /// does not depend on processing order.
    double decode_draw(std::uint64_t leg, std::int64_t packet, std::int64_t rx, std::int64_t attempt) const;

    void attach_trace(ResourceGrid& g);

    /// Moves every vehicle by one mobility step and refreshes the channel.
    void move(std::int64_t dt_ms);
};

} // namespace v2x
