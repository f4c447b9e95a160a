#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace v2x {

struct McsEntry
{
    int cqi = 0;
    std::string modulation;
    double efficiency = 0.0;   // bit/s/Hz
    double threshold_db = 0.0; // SINR giving 10% BLER
};

/// CQI-indexed MCS table. Efficiencies and thresholds are strictly increasing.
class McsTable
{
public:
    /// Throws std::invalid_argument when the entries violate the ordering.
    explicit McsTable(std::vector<McsEntry> entries);

    /// LTE 4-bit CQI table. Thresholds are AWGN 10%-BLER SINR points of a
    /// commonly used link-level mapping; CQI 5 carries 0.887 bit/Hz.
    static McsTable lte_default();

    const std::vector<McsEntry>& entries() const noexcept { return entries_; }
    const McsEntry& by_cqi(int cqi) const;
    const McsEntry& lowest() const noexcept { return entries_.front(); }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<McsEntry> entries_;
};

/// Parses a CSV table with header `cqi,modulation,efficiency,sinr_threshold_db`.
/// Numbers are read with exact round-trip parsing.
McsTable parse_mcs_table(std::string_view csv_text);
McsTable load_mcs_table_file(const std::string& path);

/// RBs needed to carry `payload_bytes` in one TTI:
/// ceil(bits / (efficiency * rb_bandwidth * tti)). The count may exceed the
/// carrier width; see segments_needed().
int transport_block_rbs(int payload_bytes, const McsEntry& mcs, double rb_bandwidth_hz = 180e3,
                        double tti_s = 1e-3);

/// TTIs needed when at most `rbs_per_tti` RBs fit in one TTI.
int segments_needed(int rbs, int rbs_per_tti);

/// Highest-efficiency entry whose threshold is <= `csi_sinr_db`, or the lowest
/// entry when none qualifies.
const McsEntry& select_uplink_mcs(double csi_sinr_db, const McsTable& table);

/// As select_uplink_mcs, restricted to entries whose transport block fits in
/// one TTI of `rbs_per_tti` RBs.
const McsEntry& select_mcs_single_tti(double csi_sinr_db, const McsTable& table, int payload_bytes,
                                      int rbs_per_tti, double rb_bandwidth_hz = 180e3);

} // namespace v2x
