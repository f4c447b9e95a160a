#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "v2x/engine/scenario.hpp"
#include "v2x/engine/simulator.hpp"
#include "v2x/metrics/statistics.hpp"
#include "v2x/rat/pc5.hpp"
#include "v2x/rat/uu.hpp"
#include "v2x/rat/world.hpp"

using namespace v2x;

namespace {

Scenario small(const char* extra = "")
{
    std::string text = R"({"density": 250, "range": 200, "scheme": "pc5", "duration": 3, "warmup": 1, "seed": 3,
        "geometry": {"building_size": 104})";
    text += extra;
    text += "}";
    return load_scenario(text);
}

std::vector<DeliveryRecord> of_scheme(const std::vector<DeliveryRecord>& all, Scheme s)
{
    std::vector<DeliveryRecord> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [s](const auto& r) { return r.scheme == s; });
    return out;
}

} // namespace

TEST_CASE("world setup: drop, serving sectors and deadlines")
{
    const auto sc = small();
    World w(sc, sc.seed);
    REQUIRE(!w.ues.empty());
    for (const auto& u : w.ues)
        CHECK(u.serving_sector == w.channel.best_sector(u.id));
    Packet p;
    p.generated = 250;
    CHECK(w.deadline(p) == 349);
    CHECK(w.decode_draw(1, 5, 6, 1) == w.decode_draw(1, 5, 6, 1));
    CHECK(w.decode_draw(1, 5, 6, 1) != w.decode_draw(2, 5, 6, 1));
}

TEST_CASE("pc5 leg sizes its transport block at CQI 4")
{
    const auto sc = small();
    World w(sc, sc.seed);
    Pc5Leg leg(w);
    CHECK(leg.rb_need() == 16);
    CHECK(leg.mcs().cqi == 4);
}

TEST_CASE("uu leg sizes eMBMS at CQI 5 and refuses unsimulated variants")
{
    const auto sc = small();
    World w(sc, sc.seed);
    UuLeg leg(w, true, false);
    CHECK(leg.embms_rbs() == 11);
    CHECK(leg.has(DownlinkMode::Unicast));
    CHECK_FALSE(leg.has(DownlinkMode::Embms));
    CHECK_THROWS_AS(leg.outcomes(DownlinkMode::Embms), std::logic_error);
}

TEST_CASE("every scheme delivers within the latency bound")
{
    auto sc = small();
    const auto res = run(sc, all_schemes());
    REQUIRE(!res.records.empty());
    for (const auto& r : res.records) {
        REQUIRE(r.delivered == r.latency_ms.has_value());
        if (r.delivered) {
            REQUIRE(*r.latency_ms >= 1);
            REQUIRE(*r.latency_ms <= sc.latency_bound);
        }
        REQUIRE(r.distance_m <= sc.range + 1e-9);
        REQUIRE(r.tx != r.rx);
    }
}

TEST_CASE("uu deliveries decompose into uplink, core and downlink")
{
    const auto res = run(small(), {Scheme::UuUnicast, Scheme::UuMulticast, Scheme::MultiratUnicast});
    int uu = 0;
    for (const auto& r : res.records) {
        if (r.ul_ms) {
            ++uu;
            REQUIRE(r.core_ms == 1);
            REQUIRE(*r.ul_ms + *r.core_ms + *r.dl_ms == *r.latency_ms);
            REQUIRE(*r.ul_ms >= 1);
            REQUIRE(*r.dl_ms >= 1);
        }
    }
    CHECK(uu > 1000);
}

TEST_CASE("no resource block is used twice in one TTI")
{
    auto sc = small(R"(, "trace": true)");
    const auto res = run(sc, all_schemes());
    REQUIRE(!res.log.trace.empty());
    std::set<std::tuple<Tti, std::string, int>> seen;
    for (const auto& row : res.log.trace)
        REQUIRE(seen.emplace(row.tti, row.carrier, row.rb).second);
}

TEST_CASE("a leg's results do not depend on which other legs run alongside")
{
    const auto sc = small();
    const auto together = run(sc, all_schemes());
    for (Scheme s : {Scheme::Pc5, Scheme::UuUnicast, Scheme::UuMulticast}) {
        const auto alone = run(sc, {s});
        CHECK(alone.records == of_scheme(together.records, s));
    }
}

TEST_CASE("sps: no scheduling request once a vehicle holds a grant")
{
    const auto res = run(small(), {Scheme::Pc5, Scheme::UuUnicast});
    std::map<std::pair<std::string, UeId>, Tti> configured;
    for (const auto& e : res.log.sps_configured)
        configured.emplace(std::make_pair(e.leg, e.ue), e.tti);
    REQUIRE(!configured.empty());
    for (const auto& sr : res.log.sr) {
        const auto it = configured.find({sr.leg, sr.ue});
        if (it != configured.end())
            REQUIRE(sr.tti <= it->second);
    }
    std::map<std::pair<std::string, UeId>, std::vector<Tti>> used;
    for (const auto& e : res.log.sps_used)
        used[{e.leg, e.ue}].push_back(e.tti);
    for (auto& [key, ttis] : used) {
        for (std::size_t i = 1; i < ttis.size(); ++i)
            REQUIRE(ttis[i] - ttis[i - 1] == 100);
    }
}

TEST_CASE("without sps every packet goes through a scheduling request")
{
    const auto res = run(small(R"(, "sps": false)"), {Scheme::Pc5});
    CHECK(res.log.sps_configured.empty());
    CHECK(static_cast<std::int64_t>(res.log.sr.size()) == res.packets_generated);
}

TEST_CASE("forced NACKs retransmit exactly 7 ms after the previous attempt")
{
    auto sc = small(R"(, "phy": {"forced_nacks": 2})");
    const auto res = run(sc, {Scheme::UuUnicast});
    std::map<std::pair<std::string, std::int64_t>, std::vector<HarqAttempt>> by_process;
    for (const auto& a : res.log.harq)
        by_process[{a.leg, a.process}].push_back(a);
    int retx = 0;
    for (auto& [key, attempts] : by_process) {
        for (std::size_t i = 1; i < attempts.size(); ++i) {
            REQUIRE(attempts[i].attempt == attempts[i - 1].attempt + 1);
            REQUIRE(attempts[i].start - attempts[i - 1].end == 7);
            ++retx;
        }
        REQUIRE_FALSE(attempts.front().ack);
    }
    CHECK(retx > 1000);
}

TEST_CASE("mode 4 runs and reports collisions")
{
    auto sc = small(R"(, "mac": {"sidelink_mode": 4}, "density": 600)");
    const auto res = run(sc, {Scheme::Pc5});
    CHECK(res.log.mode4_collisions > 0);
    CHECK(res.log.sr.empty());
    const auto prr = compute_prr(res.records, sc.latency_bound);
    CHECK(prr.front().prr > 0.1);
}

TEST_CASE("curve bler runs are reproducible")
{
    auto sc = small(R"(, "phy": {"bler_model": "curve"})");
    const auto a = run(sc, {Scheme::Pc5, Scheme::UuMulticast});
    const auto b = run(sc, {Scheme::Pc5, Scheme::UuMulticast});
    CHECK(a.records == b.records);
}

TEST_CASE("records cover every scored packet and relevant receiver")
{
    const auto sc = small();
    const auto res = run(sc, {Scheme::Pc5});
    std::set<std::int64_t> packets;
    for (const auto& r : res.records)
        packets.insert(r.packet_id);
    CHECK(static_cast<std::int64_t>(packets.size()) <= res.packets_scored);
    CHECK(res.packets_scored > 0);
    CHECK(res.packets_scored < res.packets_generated);
}
