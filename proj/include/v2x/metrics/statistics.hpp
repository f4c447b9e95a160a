#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "v2x/metrics/records.hpp"

namespace v2x {

struct PrrPoint
{
    Scheme scheme = Scheme::Pc5;
    double range_m = 0.0;
    double prr = 0.0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
};

struct CdfPoint
{
    Scheme scheme = Scheme::Pc5;
    std::int64_t latency_ms = 0;
    double cum_frac = 0.0;
};

/// Fraction of records delivered with latency <= `latency_bound_ms`, one point
/// per scheme present in `records` (in first-appearance order). Throws
/// std::invalid_argument("no samples") for an empty record set.
std::vector<PrrPoint> compute_prr(std::span<const DeliveryRecord> records,
                                  std::int64_t latency_bound_ms = std::numeric_limits<std::int64_t>::max());

/// Empirical latency CDF per scheme. The denominator is the number of records
/// of the scheme, delivered or not, so each curve ends at that scheme's PRR.
std::vector<CdfPoint> latency_cdf(std::span<const DeliveryRecord> records);

/// Median latency of delivered records of `scheme`, or nullopt without deliveries.
std::optional<double> median_latency(std::span<const DeliveryRecord> records, Scheme scheme);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either sample is constant.
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace v2x
