#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "v2x/engine/event_queue.hpp"
#include "v2x/phy/mcs.hpp"

namespace v2x {

/// Soft-combining state of packet `packet` at receiver `receiver`.
///
/// Maximal ratio combining of chase-combined copies: after the k-th copy the
/// post-combining SINR is the sum of the k per-copy linear SINRs.
struct ReceptionState
{
    std::int64_t packet = -1;
    std::int64_t receiver = -1;
    std::vector<double> copies_linear;
    double sum_linear = 0.0;

    std::size_t copies() const noexcept { return copies_linear.size(); }
    double combined_db() const;
};

/// Adds one copy (given in dB) and returns the combined SINR in dB. The sum is
/// recomputed over the copies in sorted order, so any arrival order of the same
/// copy set yields a bit-identical result.
double mrc_combine(ReceptionState& state, double copy_sinr_db);

enum class BlerKind
{
    Step,
    Curve,
};

/// Decoder abstraction over the combined SINR.
///
/// Step: success iff combined SINR >= threshold (inclusive, 1e-9 dB slack).
/// Curve: BLER(s) = 1 / (1 + 9 exp(slope (s - threshold))), which is 10% at the
/// threshold; success iff `uniform_draw` >= BLER.
struct BlerMapping
{
    BlerKind kind = BlerKind::Step;
    double slope_per_db = 1.5;

    double bler(double sinr_db, const McsEntry& mcs) const;
};

/// Throws std::invalid_argument when the state holds no copy.
bool decode(const ReceptionState& state, const McsEntry& mcs, const BlerMapping& mapping, double uniform_draw);

/// HARQ process of one transport block.
struct HarqProcess
{
    std::int64_t packet = -1;
    int attempts = 0;
    Tti last_attempt_end = 0;
    int max_attempts = 4;

    /// Logs an attempt occupying [start, start + duration).
    void record_attempt(Tti start, Tti duration = 1);
};

/// Start of the next attempt after a NACK: exactly `rtt` ms after the end of
/// the previous attempt. Returns nullopt when the attempt budget is spent.
std::optional<Tti> harq_next_attempt(const HarqProcess& proc, Tti nack_time, int rtt = 7);

} // namespace v2x
