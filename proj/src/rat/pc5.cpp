#include "v2x/rat/pc5.hpp"

#include <algorithm>
#include <cmath>

namespace v2x {

namespace {

double power_on(double rb_dbm, int rbs)
{
    return rb_dbm + 10.0 * std::log10(static_cast<double>(rbs));
}

} // namespace

Pc5Leg::Pc5Leg(World& world)
    : w_(world), mcs_(&world.mcs.by_cqi(world.sc.phy.pc5_cqi)),
      rb_need_(transport_block_rbs(world.sc.traffic.payload, *mcs_, world.sc.carriers.rb_bandwidth)),
      max_offset_(std::min(world.sc.latency_bound, world.sc.traffic.period) - 1),
      grid_("pc5", world.sc.carriers.rbs_per_tti, world.sc.traffic.period),
      pool_{world.sc.mac.pool_first_rb, world.sc.mac.pool_rbs}, mode4_rng_(world.master, "pc5-mode4")
{
    w_.attach_trace(grid_);
}

void Pc5Leg::queue(Tti t, Tx tx)
{
    air_[t].push_back(tx);
}

void Pc5Leg::on_packet(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    outcomes_.resize(static_cast<std::size_t>(id) + 1);
    outcomes_.back().assign(p.rx.size(), LegOutcome{});
    expiry_.emplace_back(w_.deadline(p), id);

    const int copies = w_.sc.phy.pc5_repetitions;
    if (w_.sc.mac.sidelink_mode == 4) {
        const int window = static_cast<int>(std::min<Tti>(w_.sc.mac.mode4_window, w_.deadline(p) - p.generated));
        const auto picks = mode4_select(pool_, rb_need_, p.generated + 1, window, copies, mode4_rng_);
        if (picks.empty())
            ++w_.log.mac_drops;
        for (const auto& c : picks)
            queue(c.tti, Tx{id, p.tx, c.rbs});
        return;
    }
    if (w_.sc.sps) {
        if (auto it = sps_.find(p.tx); it != sps_.end()) {
            const Tti occ = it->second.occurrence_at_or_after(p.generated + 1);
            w_.log.sps_used.push_back({"pc5", p.tx, occ});
            add_copy(id, occ, it->second.rbs);
            return;
        }
    }
    request_mode3(id);
}

void Pc5Leg::add_copy(std::int64_t id, Tti t, RbBlock rbs)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    queue(t, Tx{id, p.tx, rbs});
    if (w_.sc.phy.pc5_repetitions < 2)
        return;
    auto& ttis = copies_[id];
    ttis.push_back(t);
    if (ttis.size() == 1)
        repeat_.emplace(w_.deadline(p), id);
}

void Pc5Leg::request_mode3(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    const auto chain = dynamic_chain(p.generated, p.tx, w_.sc.mac);
    w_.log.sr.push_back({"pc5", p.tx, chain.sr});
    w_.events.schedule(chain.grant, [this, id, chain] {
        const Packet& pk = w_.packets[static_cast<std::size_t>(id)];
        const auto grants = mode3_request(grid_, chain.earliest_data, w_.deadline(pk), rb_need_, 1, pk.tx);
        if (grants.empty())
            ++w_.log.mac_drops;
        for (const auto& g : grants)
            add_copy(id, g.start, g.rbs);
        if (w_.sc.sps)
            configure_sps(id);
    });
}

void Pc5Leg::configure_sps(std::int64_t id)
{
    const Packet& p = w_.packets[static_cast<std::size_t>(id)];
    // Occurrences follow the generation phase of the next packet.
    const Tti anchor = p.generated + w_.sc.traffic.period;
    auto primary = sps_configure(grid_, anchor, 1, max_offset_, rb_need_, p.tx, Purpose::SidelinkMode3);
    if (!primary)
        return;
    sps_.emplace(p.tx, *primary);
    w_.log.sps_configured.push_back({"pc5", p.tx, w_.events.now()});
}

void Pc5Leg::schedule_tti(Tti t)
{
    if (repeat_.empty())
        return;
    const Tti f = t + w_.sc.mac.grant_to_data;
    auto occ = grid_.occupancy(f);
    const int wanted = w_.sc.phy.pc5_repetitions;
    for (auto it = repeat_.begin(); it != repeat_.end();) {
        const auto [deadline, id] = *it;
        auto& ttis = copies_[id];
        if (deadline < f || static_cast<int>(ttis.size()) >= wanted) {
            copies_.erase(id);
            it = repeat_.erase(it);
            continue;
        }
        if (longest_free_run(occ) < rb_need_)
            break;
        if (w_.packets[static_cast<std::size_t>(id)].generated > t ||
            std::find(ttis.begin(), ttis.end(), f) != ttis.end()) {
            ++it;
            continue;
        }
        const auto block = first_fit(occ, rb_need_);
        const UeId owner = w_.packets[static_cast<std::size_t>(id)].tx;
        grid_.allocate(f, *block, owner, Purpose::SidelinkMode3);
        mark(occ, *block);
        queue(f, Tx{id, owner, *block});
        ttis.push_back(f);
        ++it;
    }
}

void Pc5Leg::expire(Tti t)
{
    while (!expiry_.empty() && expiry_.front().first < t) {
        states_.erase(expiry_.front().second);
        expiry_.pop_front();
    }
}

void Pc5Leg::on_tti(Tti t)
{
    expire(t);
    const auto it = air_.find(t);
    if (it == air_.end())
        return;
    const std::vector<Tx> txs = std::move(it->second);
    air_.erase(it);

    std::vector<UeId> busy;
    busy.reserve(txs.size());
    for (const auto& tx : txs)
        busy.push_back(tx.ue);
    std::sort(busy.begin(), busy.end());
    for (std::size_t a = 0; a < txs.size(); ++a) {
        for (std::size_t b = a + 1; b < txs.size(); ++b) {
            if (txs[a].ue != txs[b].ue && txs[a].rbs.overlap(txs[b].rbs) > 0)
                ++w_.log.mode4_collisions;
        }
    }

    const double rb_dbm = w_.channel.ue_rb_power_dbm();
    std::vector<Interferer> interferers;
    for (const auto& tx : txs) {
        const Packet& p = w_.packets[static_cast<std::size_t>(tx.packet)];
        auto& outcome = outcomes_[static_cast<std::size_t>(tx.packet)];
        auto& states = states_[tx.packet];
        if (states.empty())
            states.resize(p.rx.size());
        const Ue& sender = w_.ues[static_cast<std::size_t>(tx.ue)];
        for (std::size_t i = 0; i < p.rx.size(); ++i) {
            if (outcome[i].delivered)
                continue;
            const UeId rx = p.rx[i];
            if (w_.sc.radio.half_duplex && std::binary_search(busy.begin(), busy.end(), rx))
                continue;
            const Ue& receiver = w_.ues[static_cast<std::size_t>(rx)];
            interferers.clear();
            for (const auto& other : txs) {
                const int ov = other.rbs.overlap(tx.rbs);
                if (&other == &tx || ov <= 0 || other.ue == rx || other.ue == tx.ue)
                    continue;
                const Ue& src = w_.ues[static_cast<std::size_t>(other.ue)];
                interferers.push_back(
                    {power_on(rb_dbm, other.rbs.count) + w_.channel.v2v_gain_db(src, receiver), other.rbs.count, ov});
            }
            const double received = power_on(rb_dbm, tx.rbs.count) + w_.channel.v2v_gain_db(sender, receiver);
            const double noise = power_on(w_.channel.ue_rb_noise_dbm(), tx.rbs.count);
            const auto sample = compute_sinr(received, interferers, noise);
            auto& st = states[i];
            mrc_combine(st, sample.sinr_db);
            const double draw = w_.decode_draw(kLegCode, tx.packet, rx, static_cast<std::int64_t>(st.copies()));
            if (decode(st, *mcs_, w_.bler, draw)) {
                outcome[i].delivered = true;
                outcome[i].delivery = t + 1;
            }
        }
    }
}

void Pc5Leg::trace_tti(Tti t)
{
    if (!w_.sc.trace)
        return;
    grid_.trace_tti(t);
    if (w_.sc.mac.sidelink_mode != 4)
        return;
    if (auto it = air_.find(t); it != air_.end()) {
        for (const auto& tx : it->second) {
            for (int rb = tx.rbs.first; rb < tx.rbs.end(); ++rb)
                w_.log.trace.push_back({t, "pc5", rb, tx.ue, Purpose::SidelinkMode4});
        }
    }
}

} // namespace v2x
