#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "v2x/mac/resource_grid.hpp"
#include "v2x/metrics/statistics.hpp"

namespace v2x {

/// Locale-independent number formatting. Without `decimals` the value is
/// written in the shortest fixed notation that reads back to the same double.
std::string format_number(double v);
std::string format_number(double v, int decimals);

inline constexpr std::string_view kRecordsHeader =
    "packet_id,tx_id,rx_id,scheme,delivered,latency_ms,ul_ms,core_ms,dl_ms,winner,distance_m";
inline constexpr std::string_view kCdfHeader = "scheme,latency_ms,cum_frac";
inline constexpr std::string_view kPrrHeader = "scheme,range_m,prr,n,seed";
inline constexpr std::string_view kTraceHeader = "tti,carrier,rb,owner,purpose";

/// Empty fields stand for absent optional values.
std::string records_csv(std::span<const DeliveryRecord> records);
std::string cdf_csv(std::span<const CdfPoint> points);
std::string prr_csv(std::span<const PrrPoint> points);
std::string trace_csv(std::span<const TraceRow> rows);

/// Readers check the header and every field; they throw std::invalid_argument
/// naming the line on malformed input.
std::vector<DeliveryRecord> parse_records_csv(std::string_view text);
std::vector<CdfPoint> parse_cdf_csv(std::string_view text);
std::vector<PrrPoint> parse_prr_csv(std::string_view text);

} // namespace v2x
