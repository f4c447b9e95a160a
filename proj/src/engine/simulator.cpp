#include "v2x/engine/simulator.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>

#include "v2x/multirat/merge.hpp"
#include "v2x/rat/pc5.hpp"
#include "v2x/rat/uu.hpp"

namespace v2x {

namespace {

// Events may still be pending this long after the last deadline.
constexpr Tti kDrainMargin = 20;

std::optional<std::int64_t> latency_of(const LegOutcome& o, Tti generated)
{
    if (!o.delivered)
        return std::nullopt;
    return o.delivery - generated;
}

DeliveryRecord base_record(const Packet& p, std::size_t i, Scheme s)
{
    DeliveryRecord r;
    r.packet_id = p.id;
    r.tx = p.tx;
    r.rx = p.rx[i];
    r.scheme = s;
    r.distance_m = p.distance[i];
    return r;
}

void fill_uu(DeliveryRecord& r, const LegOutcome& o, Tti generated, std::int64_t core)
{
    r.delivered = true;
    r.latency_ms = o.delivery - generated;
    r.ul_ms = o.ul_done - generated;
    r.core_ms = core;
    r.dl_ms = o.delivery - o.ul_done - core;
}

} // namespace

RunResult run(const Scenario& scenario)
{
    return run(scenario, {scenario.scheme});
}

RunResult run(const Scenario& sc, const std::vector<Scheme>& schemes)
{
    World w(sc, sc.seed);

    const bool need_pc5 = std::any_of(schemes.begin(), schemes.end(), uses_pc5);
    bool need_unicast = false;
    bool need_embms = false;
    for (Scheme s : schemes) {
        if (uses_uu(s)) {
            need_unicast = need_unicast || !uses_embms(s);
            need_embms = need_embms || uses_embms(s);
        }
    }
    std::unique_ptr<Pc5Leg> pc5;
    std::unique_ptr<UuLeg> uu;
    if (need_pc5)
        pc5 = std::make_unique<Pc5Leg>(w);
    if (need_unicast || need_embms)
        uu = std::make_unique<UuLeg>(w, need_unicast, need_embms);

    const Tti duration = sc.duration_ms();
    const Tti period = sc.traffic.period;

    // Each vehicle generates with its own fixed phase within the period.
    RngStream traffic(sc.seed, "traffic");
    std::vector<Tti> phase(w.ues.size());
    for (auto& ph : phase)
        ph = traffic.uniform_int(0, period - 1);

    std::function<void(UeId)> generate = [&](UeId ue) {
        const Tti now = w.events.now();
        Packet p;
        p.id = static_cast<std::int64_t>(w.packets.size());
        p.tx = ue;
        p.generated = now;
        for (const auto& rx : relevant_rx_set(ue, w.ues, w.grid, sc.range)) {
            p.rx.push_back(rx.id);
            p.distance.push_back(rx.distance);
        }
        w.packets.push_back(std::move(p));
        const auto id = w.packets.back().id;
        if (pc5)
            pc5->on_packet(id);
        if (uu)
            uu->on_packet(id);
        if (now + period < duration)
            w.events.schedule(now + period, [&generate, ue] { generate(ue); });
    };
    std::function<void()> move = [&] {
        w.move(sc.mobility.step);
        const Tti next = w.events.now() + sc.mobility.step;
        if (next < duration)
            w.events.schedule(next, move);
    };

    if (sc.mobility.step < duration)
        w.events.schedule(sc.mobility.step, move);
    for (const auto& ue : w.ues) {
        if (phase[static_cast<std::size_t>(ue.id)] < duration)
            w.events.schedule(phase[static_cast<std::size_t>(ue.id)], [&generate, id = ue.id] { generate(id); });
    }

    const Tti end = duration + sc.latency_bound + kDrainMargin;
    for (Tti t = 0; t <= end; ++t) {
        w.events.run_until(t);
        if (uu)
            uu->schedule_tti(t);
        if (pc5)
            pc5->schedule_tti(t);
        if (pc5)
            pc5->trace_tti(t);
        if (uu)
            uu->trace_tti(t);
        if (pc5)
            pc5->on_tti(t);
        if (uu)
            uu->on_tti(t);
    }

    RunResult result;
    result.vehicles = w.ues.size();
    result.packets_generated = static_cast<std::int64_t>(w.packets.size());
    const Tti warmup = sc.warmup_ms();
    const auto core = static_cast<std::int64_t>(sc.inter_bs_delay);

    for (Scheme s : schemes) {
        for (const auto& p : w.packets) {
            if (p.generated < warmup || p.generated >= duration)
                continue;
            const auto pid = static_cast<std::size_t>(p.id);
            for (std::size_t i = 0; i < p.rx.size(); ++i) {
                DeliveryRecord r = base_record(p, i, s);
                const LegOutcome* side = pc5 && uses_pc5(s) ? &pc5->outcomes()[pid][i] : nullptr;
                const LegOutcome* cell = nullptr;
                if (uses_uu(s))
                    cell = &uu->outcomes(uses_embms(s) ? DownlinkMode::Embms : DownlinkMode::Unicast)[pid][i];
                if (side && cell) {
                    const auto merged =
                        merge_outcomes(latency_of(*side, p.generated), latency_of(*cell, p.generated), sc.latency_bound);
                    r.winner = merged.winner;
                    if (merged.winner == Winner::Uu) {
                        fill_uu(r, *cell, p.generated, core);
                    } else if (merged.winner == Winner::Pc5) {
                        r.delivered = true;
                        r.latency_ms = merged.latency;
                    }
                } else if (side) {
                    if (side->delivered) {
                        r.delivered = true;
                        r.latency_ms = side->delivery - p.generated;
                    }
                } else if (cell && cell->delivered) {
                    fill_uu(r, *cell, p.generated, core);
                }
                result.records.push_back(r);
            }
        }
    }
    for (const auto& p : w.packets) {
        if (p.generated >= warmup && p.generated < duration)
            ++result.packets_scored;
    }
    w.log.pathloss_clamps = w.channel.clamp_count();
    result.log = std::move(w.log);
    return result;
}

} // namespace v2x
