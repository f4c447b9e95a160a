#include "v2x/metrics/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

#include "v2x/engine/simulator.hpp"

namespace v2x {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task)
{
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::max(1, jobs));
    if (threads == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < std::min(threads, count); ++k)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
}

SweepOutcome sweep_ranges(const Scenario& base, const std::vector<Scheme>& schemes, const std::vector<double>& ranges,
                          const std::vector<std::uint64_t>& seeds, int jobs)
{
    if (ranges.empty())
        throw std::invalid_argument("range sweep needs at least one range");
    if (seeds.empty())
        throw std::invalid_argument("range sweep needs at least one seed");
    const double max_range = *std::max_element(ranges.begin(), ranges.end());
    const bool with_pc5 = std::find(schemes.begin(), schemes.end(), Scheme::Pc5) != schemes.end();
    std::vector<Scheme> cellular;
    for (Scheme s : schemes) {
        if (uses_uu(s))
            cellular.push_back(s);
    }

    struct PerSeed
    {
        std::vector<PrrPoint> points;
        int simulations = 0;
    };
    std::vector<PerSeed> per_seed(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t k) {
        Scenario sc = base;
        sc.seed = seeds[k];
        std::vector<DeliveryRecord> direct;
        if (with_pc5) {
            sc.range = max_range;
            direct = run(sc, {Scheme::Pc5}).records;
            ++per_seed[k].simulations;
        }
        for (double r : ranges) {
            std::vector<DeliveryRecord> scored;
            for (const auto& rec : direct) {
                if (rec.distance_m <= r)
                    scored.push_back(rec);
            }
            if (!cellular.empty()) {
                sc.range = r;
                auto res = run(sc, cellular);
                ++per_seed[k].simulations;
                scored.insert(scored.end(), res.records.begin(), res.records.end());
            }
            // A range with no relevant pair scores nothing for that seed.
            if (scored.empty())
                continue;
            auto pts = compute_prr(scored, base.latency_bound);
            for (Scheme s : schemes) {
                for (auto& p : pts) {
                    if (p.scheme != s)
                        continue;
                    p.range_m = r;
                    p.seed = seeds[k];
                    per_seed[k].points.push_back(p);
                }
            }
        }
    });

    SweepOutcome out;
    for (auto& ps : per_seed) {
        out.points.insert(out.points.end(), ps.points.begin(), ps.points.end());
        out.simulations += ps.simulations;
    }
    return out;
}

} // namespace v2x
