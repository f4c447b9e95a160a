#include "v2x/phy/mcs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace v2x {

namespace {

constexpr double kThresholdTolerance = 1e-9;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, int line_no)
{
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument("mcs table line " + std::to_string(line_no) + ": bad number '" +
                                    std::string(field) + "'");
    return value;
}

} // namespace

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw std::invalid_argument("mcs table is empty");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!(entries_[i].efficiency > 0.0))
            throw std::invalid_argument("mcs efficiency must be positive");
        if (i == 0)
            continue;
        if (!(entries_[i].cqi > entries_[i - 1].cqi))
            throw std::invalid_argument("mcs cqi indices must be strictly increasing");
        if (!(entries_[i].efficiency > entries_[i - 1].efficiency))
            throw std::invalid_argument("mcs efficiencies must be strictly increasing");
        if (!(entries_[i].threshold_db > entries_[i - 1].threshold_db))
            throw std::invalid_argument("mcs thresholds must be strictly increasing");
    }
}

McsTable McsTable::lte_default()
{
    return McsTable({
        {1, "QPSK", 0.1523, -6.934},  {2, "QPSK", 0.2344, -5.147},  {3, "QPSK", 0.3770, -3.180},
        {4, "QPSK", 0.6016, -1.254},  {5, "QPSK", 0.887, 0.761},    {6, "QPSK", 1.1758, 2.700},
        {7, "16QAM", 1.4766, 4.697},  {8, "16QAM", 1.9141, 6.528},  {9, "16QAM", 2.4063, 8.576},
        {10, "64QAM", 2.7305, 10.37}, {11, "64QAM", 3.3223, 12.30}, {12, "64QAM", 3.9023, 14.18},
        {13, "64QAM", 4.5234, 15.89}, {14, "64QAM", 5.1152, 17.82}, {15, "64QAM", 5.5547, 19.83},
    });
}

const McsEntry& McsTable::by_cqi(int cqi) const
{
    for (const auto& e : entries_) {
        if (e.cqi == cqi)
            return e;
    }
    throw std::out_of_range("no mcs entry for cqi " + std::to_string(cqi));
}

McsTable parse_mcs_table(std::string_view csv_text)
{
    std::vector<McsEntry> rows;
    int line_no = 0;
    bool header = true;
    std::size_t start = 0;
    while (start <= csv_text.size()) {
        const auto nl = csv_text.find('\n', start);
        const auto line = trim(csv_text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                                   : nl - start));
        start = nl == std::string_view::npos ? csv_text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        const auto f = split(line, ',');
        if (header) {
            if (f.size() != 4 || f[0] != "cqi" || f[1] != "modulation" || f[2] != "efficiency" ||
                f[3] != "sinr_threshold_db")
                throw std::invalid_argument("mcs table header must be 'cqi,modulation,efficiency,sinr_threshold_db'");
            header = false;
            continue;
        }
        if (f.size() != 4)
            throw std::invalid_argument("mcs table line " + std::to_string(line_no) + ": expected 4 fields");
        rows.push_back({parse_number<int>(f[0], line_no), std::string(f[1]), parse_number<double>(f[2], line_no),
                        parse_number<double>(f[3], line_no)});
    }
    return McsTable(std::move(rows));
}

McsTable load_mcs_table_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read mcs table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mcs_table(ss.str());
}

int transport_block_rbs(int payload_bytes, const McsEntry& mcs, double rb_bandwidth_hz, double tti_s)
{
    if (payload_bytes <= 0)
        throw std::invalid_argument("payload must be positive");
    const double bits = 8.0 * payload_bytes;
    const double bits_per_rb = mcs.efficiency * rb_bandwidth_hz * tti_s;
    // Guard against 1696/x landing a hair above an integer through rounding.
    return static_cast<int>(std::ceil(bits / bits_per_rb - 1e-9));
}

int segments_needed(int rbs, int rbs_per_tti)
{
    return (rbs + rbs_per_tti - 1) / rbs_per_tti;
}

const McsEntry& select_uplink_mcs(double csi_sinr_db, const McsTable& table)
{
    const McsEntry* best = &table.lowest();
    for (const auto& e : table.entries()) {
        if (e.threshold_db <= csi_sinr_db + kThresholdTolerance)
            best = &e;
    }
    return *best;
}

const McsEntry& select_mcs_single_tti(double csi_sinr_db, const McsTable& table, int payload_bytes,
                                      int rbs_per_tti, double rb_bandwidth_hz)
{
    const McsEntry* fitting = nullptr;
    const McsEntry* best = nullptr;
    for (const auto& e : table.entries()) {
        if (transport_block_rbs(payload_bytes, e, rb_bandwidth_hz) > rbs_per_tti)
            continue;
        if (!fitting)
            fitting = &e;
        if (e.threshold_db <= csi_sinr_db + kThresholdTolerance)
            best = &e;
    }
    if (!fitting)
        throw std::invalid_argument("payload does not fit one TTI at any MCS");
    return best ? *best : *fitting;
}

} // namespace v2x
