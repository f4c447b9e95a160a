#include "v2x/mac/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2x {

Tti next_sr_opportunity(Tti t, std::int64_t ue, int sr_period)
{
    if (sr_period < 1)
        throw std::invalid_argument("sr period must be positive");
    const Tti offset = ue % sr_period;
    const Tti phase = ((t - offset) % sr_period + sr_period) % sr_period;
    return phase == 0 ? t : t + (sr_period - phase);
}

DelayChain dynamic_chain(Tti t, std::int64_t ue, const MacParams& mac)
{
    DelayChain c;
    c.sr = next_sr_opportunity(t, ue, mac.sr_period);
    c.grant = c.sr + mac.bs_processing;
    c.earliest_data = c.grant + mac.grant_to_data;
    return c;
}

Tti Grant::occurrence_at_or_after(Tti t) const
{
    if (kind == GrantKind::Dynamic || t <= start)
        return start;
    const Tti k = (t - start + period - 1) / period;
    return start + k * period;
}

std::optional<Grant> schedule_dynamic(ResourceGrid& grid, Tti earliest, Tti deadline, int rbs, std::int64_t owner,
                                      Purpose purpose)
{
    for (Tti t = earliest; t <= deadline; ++t) {
        if (auto block = grid.find_block(t, rbs)) {
            grid.allocate(t, *block, owner, purpose);
            Grant g;
            g.rbs = *block;
            g.start = t;
            g.owner = owner;
            return g;
        }
    }
    return std::nullopt;
}

std::optional<Grant> sps_configure(ResourceGrid& grid, Tti anchor, int min_offset, int max_offset, int rbs,
                                   std::int64_t owner, Purpose purpose)
{
    if (rbs > grid.rbs_per_tti())
        return std::nullopt;
    for (int d = min_offset; d <= max_offset; ++d) {
        const Tti start = anchor + d;
        if (auto block = grid.find_periodic_block(start, rbs)) {
            Grant g;
            g.kind = GrantKind::Sps;
            g.rbs = *block;
            g.start = start;
            g.period = grid.period();
            g.owner = owner;
            g.reservation = grid.allocate_periodic(start, *block, owner, purpose);
            return g;
        }
    }
    return std::nullopt;
}

std::vector<Grant> mode3_request(ResourceGrid& grid, Tti earliest, Tti deadline, int rbs, int copies,
                                 std::int64_t owner)
{
    std::vector<Grant> out;
    Tti from = earliest;
    for (int c = 0; c < copies; ++c) {
        auto g = schedule_dynamic(grid, from, deadline, rbs, owner, Purpose::SidelinkMode3);
        if (!g)
            break;
        from = g->start + 1;
        out.push_back(*g);
    }
    return out;
}

std::vector<Mode4Choice> mode4_select(const SidelinkPool& pool, int rb_need, Tti window_start, int window, int copies,
                                      RngStream& rng)
{
    std::vector<Mode4Choice> out;
    const int channels = pool.subchannels(rb_need);
    if (channels <= 0 || window < copies || copies <= 0)
        return out;
    const std::int64_t slots = static_cast<std::int64_t>(window) * channels;
    while (static_cast<int>(out.size()) < copies) {
        const auto slot = rng.uniform_int(0, slots - 1);
        const Tti tti = window_start + slot / channels;
        const bool taken =
            std::any_of(out.begin(), out.end(), [tti](const Mode4Choice& c) { return c.tti == tti; });
        if (!taken)
            out.push_back({tti, pool.subchannel(static_cast<int>(slot % channels), rb_need)});
    }
    std::sort(out.begin(), out.end(), [](const Mode4Choice& a, const Mode4Choice& b) { return a.tti < b.tti; });
    return out;
}

} // namespace v2x
