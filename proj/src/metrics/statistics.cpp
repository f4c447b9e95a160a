#include "v2x/metrics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace v2x {

namespace {

std::vector<Scheme> schemes_in(std::span<const DeliveryRecord> records)
{
    std::vector<Scheme> out;
    for (const auto& r : records) {
        if (std::find(out.begin(), out.end(), r.scheme) == out.end())
            out.push_back(r.scheme);
    }
    return out;
}

std::vector<double> ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

std::vector<PrrPoint> compute_prr(std::span<const DeliveryRecord> records, std::int64_t latency_bound_ms)
{
    if (records.empty())
        throw std::invalid_argument("no samples");
    std::vector<PrrPoint> out;
    for (Scheme s : schemes_in(records)) {
        std::int64_t n = 0;
        std::int64_t ok = 0;
        for (const auto& r : records) {
            if (r.scheme != s)
                continue;
            ++n;
            if (r.delivered && r.latency_ms && *r.latency_ms <= latency_bound_ms)
                ++ok;
        }
        PrrPoint p;
        p.scheme = s;
        p.n = n;
        p.prr = static_cast<double>(ok) / static_cast<double>(n);
        out.push_back(p);
    }
    return out;
}

std::vector<CdfPoint> latency_cdf(std::span<const DeliveryRecord> records)
{
    std::vector<CdfPoint> out;
    for (Scheme s : schemes_in(records)) {
        std::int64_t n = 0;
        std::map<std::int64_t, std::int64_t> hist;
        for (const auto& r : records) {
            if (r.scheme != s)
                continue;
            ++n;
            if (r.delivered && r.latency_ms)
                ++hist[*r.latency_ms];
        }
        std::int64_t cum = 0;
        for (const auto& [latency, count] : hist) {
            cum += count;
            out.push_back({s, latency, static_cast<double>(cum) / static_cast<double>(n)});
        }
    }
    return out;
}

std::optional<double> median_latency(std::span<const DeliveryRecord> records, Scheme scheme)
{
    std::vector<std::int64_t> v;
    for (const auto& r : records) {
        if (r.scheme == scheme && r.delivered && r.latency_ms)
            v.push_back(*r.latency_ms);
    }
    if (v.empty())
        return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    if (v.size() % 2 == 1)
        return static_cast<double>(v[m]);
    return (static_cast<double>(v[m - 1]) + static_cast<double>(v[m])) / 2.0;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("spearman needs samples of equal length");
    if (x.size() < 2)
        return 0.0;
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace v2x
