// Acceptance checks, one PASS/FAIL line each. Exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "v2x/engine/rng.hpp"
#include "v2x/engine/scenario.hpp"
#include "v2x/engine/simulator.hpp"
#include "v2x/metrics/csv.hpp"
#include "v2x/metrics/statistics.hpp"
#include "v2x/metrics/sweep.hpp"
#include "v2x/phy/mcs.hpp"
#include "v2x/phy/reception.hpp"

using namespace v2x;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail)
{
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok)
        ++failures;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int jobs()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Scenario preset(const std::string& name)
{
    return load_scenario_file(std::string(V2X_SOURCE_DIR) + "/configs/" + name);
}

Scenario desk()
{
    return load_scenario(R"({"density": 250, "range": 200, "scheme": "pc5", "duration": 5, "warmup": 1,
        "geometry": {"building_size": 104}})");
}

double prr_of(const std::vector<PrrPoint>& v, Scheme s)
{
    for (const auto& p : v) {
        if (p.scheme == s)
            return p.prr;
    }
    return -1.0;
}

std::string fmt(double v, int decimals = 4)
{
    return format_number(v, decimals);
}

std::string scientific(double v)
{
    std::ostringstream ss;
    ss.precision(2);
    ss << std::scientific << v;
    return ss.str();
}

void mrc_exactness()
{
    const auto t0 = Clock::now();
    RngStream r(101, "acceptance-mrc");
    double worst = 0.0;
    bool invariant = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<int>(r.uniform_int(1, 10));
        std::vector<double> db;
        for (int i = 0; i < n; ++i)
            db.push_back(r.uniform(-30.0, 30.0));
        double lin = 0.0;
        for (double v : db)
            lin += std::pow(10.0, v / 10.0);
        ReceptionState a;
        for (double v : db)
            mrc_combine(a, v);
        worst = std::max(worst, std::abs(a.sum_linear - lin) / lin);
        std::shuffle(db.begin(), db.end(), r.engine());
        ReceptionState b;
        for (double v : db)
            mrc_combine(b, v);
        invariant = invariant && b.combined_db() == a.combined_db();
    }
    const double took = seconds_since(t0);
    report(worst <= 1e-12 && invariant && took < 1.0, "mrc-exactness",
           "max relative error " + scientific(worst) + ", permutation invariant " + (invariant ? "yes" : "no") +
               ", " + fmt(took, 3) + " s");
}

void harq_timing()
{
    Scenario sc = desk();
    sc.phy.forced_nacks = 1;
    sc.inter_bs_delay = 1;
    const auto res = run(sc, {Scheme::UuUnicast});
    std::map<std::pair<std::string, std::int64_t>, std::vector<HarqAttempt>> procs;
    for (const auto& a : res.log.harq)
        procs[{a.leg, a.process}].push_back(a);
    std::int64_t forced_packets = 0;
    std::int64_t gaps = 0;
    std::int64_t bad = 0;
    std::map<std::int64_t, bool> ul_packets;
    for (const auto& [key, attempts] : procs) {
        if (key.first == "uu-ul" && attempts.size() > 1)
            ul_packets[key.second] = true;
        for (std::size_t i = 1; i < attempts.size(); ++i) {
            ++gaps;
            if (attempts[i].start - attempts[i - 1].end != 7)
                ++bad;
        }
    }
    forced_packets = static_cast<std::int64_t>(ul_packets.size());
    report(bad == 0 && forced_packets >= 1000, "harq-timing",
           std::to_string(gaps) + " retransmissions over " + std::to_string(forced_packets) +
               " forced-NACK packets, " + std::to_string(bad) + " not 7 ms after the previous attempt");
}

void sps_contract()
{
    const Scenario sc = desk();
    const auto res = run(sc, {Scheme::Pc5, Scheme::UuUnicast});
    std::map<std::pair<std::string, UeId>, Tti> configured;
    for (const auto& e : res.log.sps_configured)
        configured.emplace(std::make_pair(e.leg, e.ue), e.tti);
    std::int64_t late_sr = 0;
    for (const auto& sr : res.log.sr) {
        const auto it = configured.find({sr.leg, sr.ue});
        if (it != configured.end() && sr.tti > it->second)
            ++late_sr;
    }
    std::map<std::pair<std::string, UeId>, std::vector<Tti>> used;
    for (const auto& e : res.log.sps_used)
        used[{e.leg, e.ue}].push_back(e.tti);
    std::int64_t pairs = 0;
    std::int64_t off = 0;
    for (auto& [key, ttis] : used) {
        for (std::size_t i = 1; i < ttis.size(); ++i) {
            ++pairs;
            if (ttis[i] - ttis[i - 1] != 100)
                ++off;
        }
    }
    report(late_sr == 0 && off == 0 && pairs > 0 && !configured.empty(), "sps-contract",
           std::to_string(configured.size()) + " grants, " + std::to_string(late_sr) +
               " SR after configuration, " + std::to_string(off) + " of " + std::to_string(pairs) +
               " consecutive occurrences not 100 ms apart");
}

void latency_decomposition()
{
    const Scenario sc = desk();
    const auto res = run(sc, all_schemes());
    std::int64_t checked = 0;
    std::int64_t bad = 0;
    for (const auto& r : res.records) {
        const bool uu_delivery = r.delivered && (r.scheme == Scheme::UuUnicast || r.scheme == Scheme::UuMulticast ||
                                                 (r.winner && *r.winner == Winner::Uu));
        if (!uu_delivery)
            continue;
        ++checked;
        if (!r.ul_ms || !r.core_ms || !r.dl_ms || *r.core_ms != 1 || *r.ul_ms + *r.core_ms + *r.dl_ms != *r.latency_ms)
            ++bad;
    }
    report(bad == 0 && checked > 0, "latency-decomposition",
           std::to_string(checked) + " Uu deliveries, " + std::to_string(bad) + " violations");
}

void tb_sizing()
{
    const auto t = McsTable::lte_default();
    const int pc5 = transport_block_rbs(212, t.by_cqi(4));
    const int embms = transport_block_rbs(212, t.by_cqi(5));
    report(pc5 == 16 && embms == 11 && t.by_cqi(4).efficiency == 0.6016 && t.by_cqi(5).efficiency == 0.887,
           "tb-sizing", "212 B -> " + std::to_string(pc5) + " RBs at 0.6016 bit/Hz, " + std::to_string(embms) +
                            " RBs at 0.887 bit/Hz");
}

void dominance()
{
    const Scenario base = desk();
    const std::vector<Scheme> schemes{Scheme::Pc5, Scheme::UuMulticast, Scheme::MultiratMulticast};
    const int seeds = 10;
    std::vector<std::vector<PrrPoint>> prr(seeds);
    parallel_for(seeds, jobs(), [&](std::size_t k) {
        Scenario sc = base;
        sc.seed = k + 1;
        prr[k] = compute_prr(run(sc, schemes).records, sc.latency_bound);
    });
    int exceptions = 0;
    int gated = 0;
    int short_gain = 0;
    double min_gain = 1.0;
    double best_leg_sum = 0.0;
    double merged_sum = 0.0;
    for (const auto& p : prr) {
        const double leg = std::max(prr_of(p, Scheme::Pc5), prr_of(p, Scheme::UuMulticast));
        const double merged = prr_of(p, Scheme::MultiratMulticast);
        best_leg_sum += leg;
        merged_sum += merged;
        if (merged < leg)
            ++exceptions;
        if (leg <= 0.95) {
            ++gated;
            min_gain = std::min(min_gain, merged - leg);
            if (merged - leg < 0.01)
                ++short_gain;
        }
    }
    report(exceptions == 0, "multirat-dominance",
           std::to_string(seeds) + " seeds, " + std::to_string(exceptions) +
               " with multirat-multicast below the better leg; mean better leg " + fmt(best_leg_sum / seeds) +
               ", mean multirat-multicast " + fmt(merged_sum / seeds));
    report(short_gain == 0, "multirat-gain",
           std::to_string(gated) + " seeds with the better leg <= 0.95" +
               (gated ? ", smallest gain " + fmt(100.0 * min_gain, 2) + " pp" : std::string(" (check vacuous)")) +
               ", " + std::to_string(short_gain) + " below 1 pp");
}

void range_trend()
{
    const auto t0 = Clock::now();
    const Scenario base = preset("fig7.cfg");
    const std::vector<double> ranges{100, 150, 200, 250, 300};
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s)
        seeds.push_back(s);
    const std::vector<Scheme> schemes{Scheme::Pc5, Scheme::UuUnicast, Scheme::UuMulticast};
    const auto out = sweep_ranges(base, schemes, ranges, seeds, jobs());
    const double took = seconds_since(t0);

    std::vector<double> x, y;
    std::map<Scheme, std::map<double, std::vector<double>>> by;
    for (const auto& p : out.points) {
        by[p.scheme][p.range_m].push_back(p.prr);
        if (p.scheme == Scheme::Pc5) {
            x.push_back(p.range_m);
            y.push_back(p.prr);
        }
    }
    const double rho = spearman(x, y);
    auto spread = [&](Scheme s) {
        double lo = 1.0;
        double hi = 0.0;
        for (const auto& [range, values] : by[s]) {
            double m = 0.0;
            for (double v : values)
                m += v;
            m /= static_cast<double>(values.size());
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        return hi - lo;
    };
    const double mc = spread(Scheme::UuMulticast);
    const double uc = spread(Scheme::UuUnicast);
    report(rho <= -0.8, "pc5-range-trend",
           "Spearman(range, PRR pc5) = " + fmt(rho) + " over " + std::to_string(x.size()) + " points");
    report(mc < uc, "uu-range-sensitivity",
           "PRR spread over 100-300 m: uu-multicast " + fmt(mc) + ", uu-unicast " + fmt(uc));
    report(took <= 600.0, "sweep-runtime",
           std::to_string(out.simulations) + " simulations in " + fmt(took, 1) + " s with " + std::to_string(jobs()) +
               " worker(s)");
}

void high_density()
{
    const Scenario base = preset("fig5.cfg");
    const std::vector<Scheme> schemes{Scheme::Pc5, Scheme::UuUnicast, Scheme::UuMulticast};
    const int seeds = 3;
    std::vector<std::vector<DeliveryRecord>> per(seeds);
    parallel_for(seeds, jobs(), [&](std::size_t k) {
        Scenario sc = base;
        sc.seed = k + 1;
        per[k] = run(sc, schemes).records;
    });
    std::vector<DeliveryRecord> pooled;
    for (auto& v : per)
        pooled.insert(pooled.end(), v.begin(), v.end());
    const auto prr = compute_prr(pooled, base.latency_bound);
    const double uni = prr_of(prr, Scheme::UuUnicast);
    const double multi = prr_of(prr, Scheme::UuMulticast);
    report(uni <= multi, "high-density-prr-order",
           "density " + fmt(base.density, 0) + "/km2, R " + fmt(base.range, 0) + " m: uu-unicast " + fmt(uni) +
               " <= uu-multicast " + fmt(multi));
    const auto m_pc5 = median_latency(pooled, Scheme::Pc5);
    const auto m_mc = median_latency(pooled, Scheme::UuMulticast);
    const auto m_uc = median_latency(pooled, Scheme::UuUnicast);
    const bool ok = m_pc5 && m_mc && m_uc && *m_pc5 < *m_mc && *m_mc < *m_uc;
    auto show = [](const std::optional<double>& m) { return m ? fmt(*m, 1) : std::string("n/a"); };
    report(ok, "latency-order",
           "median latency pc5 " + show(m_pc5) + " ms < uu-multicast " + show(m_mc) + " ms < uu-unicast " +
               show(m_uc) + " ms");
}

void determinism()
{
    Scenario sc = desk();
    sc.duration = 3.0;
    sc.trace = true;
    auto files = [&] {
        const auto res = run(sc, all_schemes());
        const auto prr = compute_prr(res.records, sc.latency_bound);
        const auto cdf = latency_cdf(res.records);
        return records_csv(res.records) + prr_csv(prr) + cdf_csv(cdf) + trace_csv(res.log.trace);
    };
    const auto a = files();
    const auto b = files();
    report(a == b, "determinism", "two runs of the same config and seed, " + std::to_string(a.size()) +
                                      " bytes of CSV, " + (a == b ? "identical" : "different"));
}

} // namespace

int main()
{
    mrc_exactness();
    harq_timing();
    sps_contract();
    latency_decomposition();
    tb_sizing();
    dominance();
    range_trend();
    high_density();
    determinism();
    std::cout << (failures == 0 ? "all acceptance checks passed" : std::to_string(failures) + " check(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
