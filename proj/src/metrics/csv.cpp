#include "v2x/metrics/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace v2x {

namespace {

std::vector<std::string_view> split_line(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Data lines of a CSV document after checking its header.
std::vector<std::vector<std::string_view>> table(std::string_view text, std::string_view header, std::size_t fields)
{
    std::vector<std::vector<std::string_view>> rows;
    std::size_t start = 0;
    int line_no = 0;
    bool seen_header = false;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos)
            nl = text.size();
        auto line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!seen_header) {
            if (line != header)
                throw std::invalid_argument("csv header mismatch: expected '" + std::string(header) + "'");
            seen_header = true;
            continue;
        }
        if (line.empty())
            continue;
        auto f = split_line(line);
        if (f.size() != fields)
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(fields) + " fields");
        rows.push_back(std::move(f));
    }
    if (!seen_header)
        throw std::invalid_argument("csv header missing");
    return rows;
}

template <typename T>
T number(std::string_view field, std::size_t row)
{
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument("csv row " + std::to_string(row + 1) + ": bad number '" + std::string(field) + "'");
    return value;
}

std::optional<std::int64_t> optional_int(std::string_view field, std::size_t row)
{
    if (field.empty())
        return std::nullopt;
    return number<std::int64_t>(field, row);
}

void append_optional(std::string& out, const std::optional<std::int64_t>& v)
{
    if (v)
        out += std::to_string(*v);
    out += ',';
}

} // namespace

std::string format_number(double v)
{
    char buf[128];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string format_number(double v, int decimals)
{
    char buf[128];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string records_csv(std::span<const DeliveryRecord> records)
{
    std::string out(kRecordsHeader);
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.packet_id);
        out += ',';
        out += std::to_string(r.tx);
        out += ',';
        out += std::to_string(r.rx);
        out += ',';
        out += to_string(r.scheme);
        out += ',';
        out += r.delivered ? "1," : "0,";
        append_optional(out, r.latency_ms);
        append_optional(out, r.ul_ms);
        append_optional(out, r.core_ms);
        append_optional(out, r.dl_ms);
        if (r.winner)
            out += to_string(*r.winner);
        out += ',';
        out += format_number(r.distance_m, 3);
        out += '\n';
    }
    return out;
}

std::string cdf_csv(std::span<const CdfPoint> points)
{
    std::string out(kCdfHeader);
    out += '\n';
    for (const auto& p : points) {
        out += to_string(p.scheme);
        out += ',';
        out += std::to_string(p.latency_ms);
        out += ',';
        out += format_number(p.cum_frac);
        out += '\n';
    }
    return out;
}

std::string prr_csv(std::span<const PrrPoint> points)
{
    std::string out(kPrrHeader);
    out += '\n';
    for (const auto& p : points) {
        out += to_string(p.scheme);
        out += ',';
        out += format_number(p.range_m);
        out += ',';
        out += format_number(p.prr);
        out += ',';
        out += std::to_string(p.n);
        out += ',';
        out += std::to_string(p.seed);
        out += '\n';
    }
    return out;
}

std::string trace_csv(std::span<const TraceRow> rows)
{
    std::string out(kTraceHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.tti);
        out += ',';
        out += r.carrier;
        out += ',';
        out += std::to_string(r.rb);
        out += ',';
        out += std::to_string(r.owner);
        out += ',';
        out += to_string(r.purpose);
        out += '\n';
    }
    return out;
}

std::vector<DeliveryRecord> parse_records_csv(std::string_view text)
{
    std::vector<DeliveryRecord> out;
    const auto rows = table(text, kRecordsHeader, 11);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& f = rows[i];
        DeliveryRecord r;
        r.packet_id = number<std::int64_t>(f[0], i);
        r.tx = number<UeId>(f[1], i);
        r.rx = number<UeId>(f[2], i);
        r.scheme = parse_scheme(f[3]);
        if (f[4] != "0" && f[4] != "1")
            throw std::invalid_argument("csv row " + std::to_string(i + 1) + ": delivered must be 0 or 1");
        r.delivered = f[4] == "1";
        r.latency_ms = optional_int(f[5], i);
        r.ul_ms = optional_int(f[6], i);
        r.core_ms = optional_int(f[7], i);
        r.dl_ms = optional_int(f[8], i);
        if (!f[9].empty())
            r.winner = parse_winner(f[9]);
        r.distance_m = number<double>(f[10], i);
        if (r.delivered != r.latency_ms.has_value())
            throw std::invalid_argument("csv row " + std::to_string(i + 1) + ": latency present iff delivered");
        out.push_back(r);
    }
    return out;
}

std::vector<CdfPoint> parse_cdf_csv(std::string_view text)
{
    std::vector<CdfPoint> out;
    const auto rows = table(text, kCdfHeader, 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& f = rows[i];
        CdfPoint p{parse_scheme(f[0]), number<std::int64_t>(f[1], i), number<double>(f[2], i)};
        if (!(p.cum_frac >= 0.0 && p.cum_frac <= 1.0))
            throw std::invalid_argument("csv row " + std::to_string(i + 1) + ": cum_frac outside [0, 1]");
        out.push_back(p);
    }
    return out;
}

std::vector<PrrPoint> parse_prr_csv(std::string_view text)
{
    std::vector<PrrPoint> out;
    const auto rows = table(text, kPrrHeader, 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& f = rows[i];
        PrrPoint p;
        p.scheme = parse_scheme(f[0]);
        p.range_m = number<double>(f[1], i);
        p.prr = number<double>(f[2], i);
        p.n = number<std::int64_t>(f[3], i);
        p.seed = number<std::uint64_t>(f[4], i);
        if (!(p.prr >= 0.0 && p.prr <= 1.0))
            throw std::invalid_argument("csv row " + std::to_string(i + 1) + ": prr outside [0, 1]");
        out.push_back(p);
    }
    return out;
}

} // namespace v2x
