#include "v2x/rat/uu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace v2x {

namespace {

double power_on(double rb_dbm, int rbs)
{
    return rb_dbm + 10.0 * std::log10(static_cast<double>(rbs));
}

std::vector<ResourceGrid> sector_grids(const std::string& prefix, const Scenario& sc)
{
    std::vector<ResourceGrid> grids;
    for (int s = 0; s < SectorSite::kSectors; ++s)
        grids.emplace_back(prefix + "-s" + std::to_string(s), sc.carriers.rbs_per_tti, sc.traffic.period);
    return grids;
}

constexpr std::int64_t kRxKeyShift = std::int64_t{1} << 20;

} // namespace

UuLeg::UuLeg(World& world, bool unicast, bool embms)
    : w_(world), ul_grids_(sector_grids("uu-ul", world.sc)), embms_mcs_(&world.mcs.by_cqi(world.sc.phy.embms_cqi)),
      embms_rbs_(transport_block_rbs(world.sc.traffic.payload, *embms_mcs_, world.sc.carriers.rb_bandwidth)),
      min_unicast_rbs_(transport_block_rbs(world.sc.traffic.payload, world.mcs.entries().back(),
                                           world.sc.carriers.rb_bandwidth)),
      max_offset_(std::min(world.sc.latency_bound, world.sc.traffic.period) - 1)
{
    for (auto& g : ul_grids_)
        w_.attach_trace(g);
    if (unicast)
        downlinks_.push_back(Downlink{DownlinkMode::Unicast, sector_grids("uu-dl-unicast", w_.sc), {}, {}, {}, {}, {}});
    if (embms)
        downlinks_.push_back(Downlink{DownlinkMode::Embms, sector_grids("uu-dl-embms", w_.sc), {}, {}, {}, {}, {}});
    for (auto& dl : downlinks_) {
        for (auto& g : dl.grids)
            w_.attach_trace(g);
    }
}

bool UuLeg::has(DownlinkMode mode) const noexcept
{
    return std::any_of(downlinks_.begin(), downlinks_.end(), [mode](const Downlink& d) { return d.mode == mode; });
}

const std::vector<std::vector<LegOutcome>>& UuLeg::outcomes(DownlinkMode mode) const
{
    for (const auto& dl : downlinks_) {
        if (dl.mode == mode)
            return dl.outcomes;
    }
    throw std::logic_error("downlink variant not simulated");
}

const McsEntry& UuLeg::uplink_mcs(UeId ue, int sector) const
{
    const auto& ch = w_.channel;
    // Noise-limited SINR, independent of the allocation size because the
    // vehicle keeps a constant power spectral density.
    const double snr = ch.ue_rb_power_dbm() + ch.sector_gain_db(ue, sector) + ch.uu_gain_db(ue) - ch.bs_rb_noise_dbm();
    const auto& sc = w_.sc;
    return select_mcs_single_tti(snr - sc.phy.ul_csi_margin, w_.mcs, sc.traffic.payload, sc.carriers.rbs_per_tti,
                                 sc.carriers.rb_bandwidth);
}

void UuLeg::on_packet(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    for (auto& dl : downlinks_) {
        dl.outcomes.resize(static_cast<std::size_t>(id) + 1);
        dl.outcomes.back().assign(p.rx.size(), LegOutcome{});
    }
    expiry_.emplace_back(w_.deadline(p), id);

    if (w_.sc.sps) {
        if (auto it = ul_sps_.find(p.tx); it != ul_sps_.end()) {
            const auto& sps = it->second;
            const Tti occ = sps.grant.occurrence_at_or_after(p.generated + 1);
            if (occ <= w_.deadline(p)) {
                ul_air_[occ].push_back(UlTx{id, p.tx, sps.sector, sps.grant.rbs, sps.mcs});
                w_.log.sps_used.push_back({"uu", p.tx, occ});
            }
            return;
        }
    }
    request_uplink(id);
}

void UuLeg::request_uplink(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    const auto chain = dynamic_chain(p.generated, p.tx, w_.sc.mac);
    w_.log.sr.push_back({"uu", p.tx, chain.sr});
    w_.events.schedule(chain.grant, [this, id, chain] {
        const Packet& pk = w_.packets[static_cast<std::size_t>(id)];
        const int sector = w_.ues[static_cast<std::size_t>(pk.tx)].serving_sector;
        const McsEntry& mcs = uplink_mcs(pk.tx, sector);
        const int rbs = transport_block_rbs(w_.sc.traffic.payload, mcs, w_.sc.carriers.rb_bandwidth);
        auto g = schedule_dynamic(ul_grids_[static_cast<std::size_t>(sector)], chain.earliest_data, w_.deadline(pk),
                                  rbs, pk.tx, Purpose::UplinkData);
        if (g)
            ul_air_[g->start].push_back(UlTx{id, pk.tx, sector, g->rbs, &mcs});
        else
            ++w_.log.mac_drops;
        if (w_.sc.sps)
            configure_sps(id, sector, mcs, rbs);
    });
}

void UuLeg::configure_sps(std::int64_t id, int sector, const McsEntry& mcs, int rbs)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    const Tti anchor = p.generated + w_.sc.traffic.period;
    auto g = sps_configure(ul_grids_[static_cast<std::size_t>(sector)], anchor, 1, max_offset_, rbs, p.tx,
                           Purpose::UplinkData);
    if (!g)
        return;
    ul_sps_.emplace(p.tx, UlSps{*g, sector, &mcs});
    w_.log.sps_configured.push_back({"uu", p.tx, w_.events.now()});
}

void UuLeg::uplink_air(Tti t)
{
    const auto it = ul_air_.find(t);
    if (it == ul_air_.end())
        return;
    const std::vector<UlTx> txs = std::move(it->second);
    ul_air_.erase(it);

    const auto& ch = w_.channel;
    const auto& sc = w_.sc;
    std::vector<Interferer> interferers;
    for (const auto& x : txs) {
        const Packet& p = w_.packets[static_cast<std::size_t>(x.packet)];
        interferers.clear();
        for (const auto& y : txs) {
            const int ov = y.rbs.overlap(x.rbs);
            if (y.sector == x.sector || ov <= 0)
                continue;
            interferers.push_back({power_on(ch.ue_rb_power_dbm(), y.rbs.count) + ch.sector_gain_db(y.ue, x.sector) +
                                       ch.uu_gain_db(y.ue),
                                   y.rbs.count, ov});
        }
        const double received =
            power_on(ch.ue_rb_power_dbm(), x.rbs.count) + ch.sector_gain_db(x.ue, x.sector) + ch.uu_gain_db(x.ue);
        const auto sample = compute_sinr(received, interferers, power_on(ch.bs_rb_noise_dbm(), x.rbs.count));

        auto [st_it, fresh] = ul_states_.try_emplace(x.packet);
        auto& st = st_it->second;
        if (fresh) {
            st.harq.packet = x.packet;
            st.harq.max_attempts = sc.phy.max_harq_attempts;
        }
        mrc_combine(st.reception, sample.sinr_db);
        st.harq.record_attempt(t);
        const bool forced = st.harq.attempts <= sc.phy.forced_nacks;
        const bool ok = !forced && decode(st.reception, *x.mcs, w_.bler,
                                          w_.decode_draw(kUplinkCode, x.packet, 0, st.harq.attempts));
        w_.log.harq.push_back({"uu-ul", x.packet, st.harq.attempts, t, t + 1, ok});
        if (ok) {
            const Tti done = t + 1;
            for (auto& dl : downlinks_) {
                for (auto& o : dl.outcomes[static_cast<std::size_t>(x.packet)])
                    o.ul_done = done;
            }
            ul_states_.erase(st_it);
            const std::int64_t id = x.packet;
            w_.events.schedule(done + sc.inter_bs_delay, [this, id] { on_bs_arrival(id); });
            continue;
        }
        const auto next = harq_next_attempt(st.harq, t + 1, sc.phy.harq_rtt);
        auto& grid = ul_grids_[static_cast<std::size_t>(x.sector)];
        std::optional<RbBlock> block;
        if (next && *next <= w_.deadline(p))
            block = grid.is_free(*next, x.rbs) ? std::optional<RbBlock>(x.rbs) : grid.find_block(*next, x.rbs.count);
        if (!block) {
            ul_states_.erase(st_it);
            continue;
        }
        grid.allocate(*next, *block, x.ue, Purpose::UplinkRetx);
        UlTx retx = x;
        retx.rbs = *block;
        ul_air_[*next].push_back(retx);
    }
}

void UuLeg::on_bs_arrival(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    const Tti now = w_.events.now();
    const Tti eligible = now + w_.sc.mac.dl_processing;
    const auto& ch = w_.channel;
    const auto& sc = w_.sc;
    for (auto& dl : downlinks_) {
        if (dl.mode == DownlinkMode::Embms) {
            unsigned mask = 0;
            for (UeId rx : p.rx)
                mask |= 1u << w_.ues[static_cast<std::size_t>(rx)].serving_sector;
            if (mask != 0)
                dl.embms.push_back(EmbmsJob{id, mask, eligible, w_.deadline(p), 0, -1});
            continue;
        }
        for (std::size_t i = 0; i < p.rx.size(); ++i) {
            const UeId rx = p.rx[i];
            const int s = w_.ues[static_cast<std::size_t>(rx)].serving_sector;
            // Worst-case CSI: every other sector transmits on the same RBs.
            double interference_mw = db_to_linear(ch.ue_rb_noise_dbm());
            for (int o = 0; o < kSectors; ++o) {
                if (o != s)
                    interference_mw += db_to_linear(ch.bs_rb_power_dbm() + ch.sector_gain_db(rx, o) + ch.uu_gain_db(rx));
            }
            const double csi =
                ch.bs_rb_power_dbm() + ch.sector_gain_db(rx, s) + ch.uu_gain_db(rx) - linear_to_db(interference_mw);
            const McsEntry& mcs =
                select_mcs_single_tti(csi, w_.mcs, sc.traffic.payload, sc.carriers.rbs_per_tti, sc.carriers.rb_bandwidth);
            const int rbs = transport_block_rbs(sc.traffic.payload, mcs, sc.carriers.rb_bandwidth);
            dl.unicast[static_cast<std::size_t>(s)].push_back(UnicastJob{id, i, eligible, w_.deadline(p), &mcs, rbs});
        }
    }
}

void UuLeg::schedule_tti(Tti t)
{
    if (t % 1000 == 0) {
        for (auto& g : ul_grids_)
            g.prune_before(t);
        for (auto& dl : downlinks_) {
            for (auto& g : dl.grids)
                g.prune_before(t);
        }
    }
    for (auto& dl : downlinks_) {
        if (dl.mode == DownlinkMode::Embms)
            schedule_embms(dl, t);
        else
            schedule_unicast(dl, t);
    }
}

void UuLeg::schedule_embms(Downlink& dl, Tti t)
{
    std::array<std::vector<char>, kSectors> occ;
    for (int s = 0; s < kSectors; ++s)
        occ[static_cast<std::size_t>(s)] = dl.grids[static_cast<std::size_t>(s)].occupancy(t);
    const int copies = w_.sc.phy.embms_repetitions;
    // First copies of every waiting packet go before any repetition.
    for (int pass = 0; pass < 2; ++pass) {
        for (auto& job : dl.embms) {
            if (job.deadline < t || job.eligible > t)
                continue;
            const bool wanted = pass == 0 ? job.sent == 0 : job.sent > 0 && job.sent < copies && job.last < t;
            if (!wanted)
                continue;
            std::vector<char> joint(static_cast<std::size_t>(w_.sc.carriers.rbs_per_tti), 0);
            for (int s = 0; s < kSectors; ++s) {
                if (job.mask & (1u << s)) {
                    for (std::size_t rb = 0; rb < joint.size(); ++rb)
                        joint[rb] |= occ[static_cast<std::size_t>(s)][rb];
                }
            }
            const auto block = first_fit(joint, embms_rbs_);
            if (!block)
                continue;
            const UeId owner = w_.packets[static_cast<std::size_t>(job.packet)].tx;
            for (int s = 0; s < kSectors; ++s) {
                if (!(job.mask & (1u << s)))
                    continue;
                dl.grids[static_cast<std::size_t>(s)].allocate(t, *block, owner, Purpose::DownlinkMulticast);
                mark(occ[static_cast<std::size_t>(s)], *block);
                dl.air[t].push_back(DlTx{s, *block, job.packet, 0, job.mask, embms_mcs_, true});
            }
            ++job.sent;
            job.last = t;
        }
    }
    dl.embms.remove_if([&](const EmbmsJob& j) { return j.sent >= copies || j.deadline <= t; });
}

void UuLeg::schedule_unicast(Downlink& dl, Tti t)
{
    for (int s = 0; s < kSectors; ++s) {
        auto& grid = dl.grids[static_cast<std::size_t>(s)];
        auto occ = grid.occupancy(t);
        int room = longest_free_run(occ);
        auto& q = dl.unicast[static_cast<std::size_t>(s)];
        for (auto it = q.begin(); it != q.end();) {
            if (it->deadline < t) {
                it = q.erase(it);
                continue;
            }
            if (it->eligible > t || room < min_unicast_rbs_)
                break;
            if (it->rbs > room) {
                ++it;
                continue;
            }
            const auto block = first_fit(occ, it->rbs);
            const UeId rx = w_.packets[static_cast<std::size_t>(it->packet)].rx[it->rx_index];
            grid.allocate(t, *block, rx, Purpose::DownlinkUnicast);
            mark(occ, *block);
            room = longest_free_run(occ);
            dl.air[t].push_back(DlTx{s, *block, it->packet, it->rx_index, 0, it->mcs, false});
            it = q.erase(it);
        }
    }
}

void UuLeg::downlink_air(Downlink& dl, Tti t)
{
    const auto it = dl.air.find(t);
    if (it == dl.air.end())
        return;
    const std::vector<DlTx> txs = std::move(it->second);
    dl.air.erase(it);

    const auto& ch = w_.channel;
    const auto& sc = w_.sc;
    const double noise_rb = ch.ue_rb_noise_dbm();
    std::vector<Interferer> interferers;
    auto downlink_power = [&](const DlTx& y, UeId rx) {
        return power_on(ch.bs_rb_power_dbm(), y.rbs.count) + ch.sector_gain_db(rx, y.sector) + ch.uu_gain_db(rx);
    };

    std::vector<std::int64_t> multicast_packets;
    for (const auto& x : txs) {
        if (x.embms) {
            if (std::find(multicast_packets.begin(), multicast_packets.end(), x.packet) == multicast_packets.end())
                multicast_packets.push_back(x.packet);
            continue;
        }
        const Packet& p = w_.packets[static_cast<std::size_t>(x.packet)];
        const UeId rx = p.rx[x.rx_index];
        interferers.clear();
        for (const auto& y : txs) {
            const int ov = y.rbs.overlap(x.rbs);
            if (y.sector != x.sector && ov > 0)
                interferers.push_back({downlink_power(y, rx), y.rbs.count, ov});
        }
        const auto sample = compute_sinr(downlink_power(x, rx), interferers, power_on(noise_rb, x.rbs.count));
        auto& states = dl.states[x.packet];
        if (states.empty())
            states.resize(p.rx.size());
        auto& st = states[x.rx_index];
        st.harq.packet = x.packet;
        st.harq.max_attempts = sc.phy.max_harq_attempts;
        mrc_combine(st.reception, sample.sinr_db);
        st.harq.record_attempt(t);
        const bool forced = st.harq.attempts <= sc.phy.forced_nacks;
        const bool ok =
            !forced && decode(st.reception, *x.mcs, w_.bler, w_.decode_draw(kUnicastCode, x.packet, rx, st.harq.attempts));
        w_.log.harq.push_back(
            {"uu-dl", x.packet * kRxKeyShift + static_cast<std::int64_t>(x.rx_index), st.harq.attempts, t, t + 1, ok});
        auto& outcome = dl.outcomes[static_cast<std::size_t>(x.packet)][x.rx_index];
        if (ok) {
            outcome.delivered = true;
            outcome.delivery = t + 1;
            continue;
        }
        const auto next = harq_next_attempt(st.harq, t + 1, sc.phy.harq_rtt);
        if (!next || *next > w_.deadline(p))
            continue;
        auto& grid = dl.grids[static_cast<std::size_t>(x.sector)];
        const auto block =
            grid.is_free(*next, x.rbs) ? std::optional<RbBlock>(x.rbs) : grid.find_block(*next, x.rbs.count);
        if (!block)
            continue;
        grid.allocate(*next, *block, rx, Purpose::DownlinkRetx);
        DlTx retx = x;
        retx.rbs = *block;
        dl.air[*next].push_back(retx);
    }

    for (std::int64_t id : multicast_packets) {
        const Packet& p = w_.packets[static_cast<std::size_t>(id)];
        auto& outcome = dl.outcomes[static_cast<std::size_t>(id)];
        auto& states = dl.states[id];
        if (states.empty())
            states.resize(p.rx.size());
        for (std::size_t i = 0; i < p.rx.size(); ++i) {
            if (outcome[i].delivered)
                continue;
            const UeId rx = p.rx[i];
            auto& st = states[i];
            const McsEntry* mcs = nullptr;
            for (const auto& x : txs) {
                if (!x.embms || x.packet != id)
                    continue;
                mcs = x.mcs;
                // Sectors sending the same packet add up; only the others interfere.
                interferers.clear();
                for (const auto& y : txs) {
                    const int ov = y.rbs.overlap(x.rbs);
                    if (ov > 0 && !(x.mask & (1u << y.sector)))
                        interferers.push_back({downlink_power(y, rx), y.rbs.count, ov});
                }
                const auto sample = compute_sinr(downlink_power(x, rx), interferers, power_on(noise_rb, x.rbs.count));
                mrc_combine(st.reception, sample.sinr_db);
            }
            const double draw = w_.decode_draw(kEmbmsCode, id, rx, t);
            if (decode(st.reception, *mcs, w_.bler, draw)) {
                outcome[i].delivered = true;
                outcome[i].delivery = t + 1;
            }
        }
    }
}

void UuLeg::expire(Tti t)
{
    while (!expiry_.empty() && expiry_.front().first < t) {
        const auto id = expiry_.front().second;
        ul_states_.erase(id);
        for (auto& dl : downlinks_)
            dl.states.erase(id);
        expiry_.pop_front();
    }
}

void UuLeg::on_tti(Tti t)
{
    expire(t);
    uplink_air(t);
    for (auto& dl : downlinks_)
        downlink_air(dl, t);
}

void UuLeg::trace_tti(Tti t)
{
    if (!w_.sc.trace)
        return;
    for (auto& g : ul_grids_)
        g.trace_tti(t);
    for (auto& dl : downlinks_) {
        for (auto& g : dl.grids)
            g.trace_tti(t);
    }
}

} // namespace v2x
