#include "v2x/phy/reception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2x {

namespace {

constexpr double kDecodeTolerance = 1e-9;

} // namespace

double ReceptionState::combined_db() const
{
    return 10.0 * std::log10(sum_linear);
}

double mrc_combine(ReceptionState& state, double copy_sinr_db)
{
    state.copies_linear.push_back(std::pow(10.0, copy_sinr_db / 10.0));
    std::vector<double> sorted = state.copies_linear;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted)
        sum += v;
    state.sum_linear = sum;
    return state.combined_db();
}

double BlerMapping::bler(double sinr_db, const McsEntry& mcs) const
{
    if (kind == BlerKind::Step)
        return sinr_db >= mcs.threshold_db - kDecodeTolerance ? 0.0 : 1.0;
    return 1.0 / (1.0 + 9.0 * std::exp(slope_per_db * (sinr_db - mcs.threshold_db)));
}

bool decode(const ReceptionState& state, const McsEntry& mcs, const BlerMapping& mapping, double uniform_draw)
{
    if (state.copies() == 0)
        throw std::invalid_argument("decode needs at least one received copy");
    const double sinr = state.combined_db();
    if (mapping.kind == BlerKind::Step)
        return sinr >= mcs.threshold_db - kDecodeTolerance;
    return uniform_draw >= mapping.bler(sinr, mcs);
}

void HarqProcess::record_attempt(Tti start, Tti duration)
{
    ++attempts;
    last_attempt_end = start + duration;
}

std::optional<Tti> harq_next_attempt(const HarqProcess& proc, Tti nack_time, int rtt)
{
    if (nack_time < proc.last_attempt_end)
        throw std::invalid_argument("NACK precedes the end of the attempt");
    if (proc.attempts >= proc.max_attempts)
        return std::nullopt;
    return proc.last_attempt_end + rtt;
}

} // namespace v2x
