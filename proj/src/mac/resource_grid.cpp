#include "v2x/mac/resource_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2x {

const char* to_string(Purpose p) noexcept
{
    switch (p) {
    case Purpose::UplinkData: return "ul-data";
    case Purpose::UplinkRetx: return "ul-retx";
    case Purpose::DownlinkUnicast: return "dl-unicast";
    case Purpose::DownlinkRetx: return "dl-retx";
    case Purpose::DownlinkMulticast: return "dl-embms";
    case Purpose::SidelinkMode3: return "sl-mode3";
    case Purpose::SidelinkMode4: return "sl-mode4";
    }
    return "?";
}

int RbBlock::overlap(const RbBlock& o) const noexcept
{
    return std::max(0, std::min(end(), o.end()) - std::max(first, o.first));
}

std::optional<RbBlock> first_fit(const std::vector<char>& occupancy, int count)
{
    if (count <= 0)
        return std::nullopt;
    int run = 0;
    for (int rb = 0; rb < static_cast<int>(occupancy.size()); ++rb) {
        run = occupancy[static_cast<std::size_t>(rb)] ? 0 : run + 1;
        if (run == count)
            return RbBlock{rb - count + 1, count};
    }
    return std::nullopt;
}

int longest_free_run(const std::vector<char>& occupancy)
{
    int run = 0;
    int best = 0;
    for (char used : occupancy) {
        run = used ? 0 : run + 1;
        best = std::max(best, run);
    }
    return best;
}

void mark(std::vector<char>& occupancy, RbBlock block)
{
    for (int rb = block.first; rb < block.end(); ++rb)
        occupancy.at(static_cast<std::size_t>(rb)) = 1;
}

ResourceGrid::ResourceGrid(std::string carrier, int rbs_per_tti, int period)
    : carrier_(std::move(carrier)), rbs_per_tti_(rbs_per_tti), period_(period),
      periodic_by_phase_(static_cast<std::size_t>(period))
{
    if (rbs_per_tti < 0 || period < 1)
        throw std::invalid_argument("resource grid needs rbs_per_tti >= 0 and period >= 1");
}

bool ResourceGrid::periodic_active(const Periodic& p, Tti tti) const noexcept
{
    return p.active && tti >= p.start && (tti - p.start) % period_ == 0;
}

bool ResourceGrid::is_free(Tti tti, RbBlock block) const
{
    if (block.count <= 0 || block.first < 0 || block.end() > rbs_per_tti_)
        return false;
    if (auto it = one_off_.find(tti); it != one_off_.end()) {
        for (const auto& a : it->second) {
            if (a.rbs.overlap(block) > 0)
                return false;
        }
    }
    for (int id : periodic_by_phase_[static_cast<std::size_t>(tti % period_)]) {
        const auto& p = periodic_[static_cast<std::size_t>(id)];
        if (periodic_active(p, tti) && p.alloc.rbs.overlap(block) > 0)
            return false;
    }
    return true;
}

int ResourceGrid::free_rbs(Tti tti) const
{
    int used = 0;
    for (const auto& a : allocations(tti))
        used += a.rbs.count;
    return rbs_per_tti_ - used;
}

std::optional<RbBlock> ResourceGrid::find_block(Tti tti, int count) const
{
    if (count <= 0 || count > rbs_per_tti_)
        return std::nullopt;
    for (int first = 0; first + count <= rbs_per_tti_; ++first) {
        if (is_free(tti, {first, count}))
            return RbBlock{first, count};
    }
    return std::nullopt;
}

std::optional<RbBlock> ResourceGrid::find_periodic_block(Tti start, int count) const
{
    if (count <= 0 || count > rbs_per_tti_)
        return std::nullopt;
    const auto phase = static_cast<std::size_t>(start % period_);
    for (int first = 0; first + count <= rbs_per_tti_; ++first) {
        const RbBlock block{first, count};
        bool ok = true;
        // Periodic reservations of the same phase collide sooner or later,
        // whatever their start.
        for (int id : periodic_by_phase_[phase]) {
            const auto& p = periodic_[static_cast<std::size_t>(id)];
            if (p.active && p.alloc.rbs.overlap(block) > 0) {
                ok = false;
                break;
            }
        }
        for (auto it = one_off_.lower_bound(start); ok && it != one_off_.end(); ++it) {
            if ((it->first - start) % period_ != 0)
                continue;
            for (const auto& a : it->second) {
                if (a.rbs.overlap(block) > 0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            return block;
    }
    return std::nullopt;
}

void ResourceGrid::allocate(Tti tti, RbBlock block, std::int64_t owner, Purpose purpose)
{
    if (!is_free(tti, block))
        throw std::logic_error("double allocation on " + carrier_ + " at tti " + std::to_string(tti));
    one_off_[tti].push_back(Allocation{block, owner, purpose});
}

int ResourceGrid::allocate_periodic(Tti start, RbBlock block, std::int64_t owner, Purpose purpose)
{
    const auto found = find_periodic_block(start, block.count);
    // The requested block itself must be conflict-free, not just some block.
    bool ok = block.first >= 0 && block.end() <= rbs_per_tti_;
    if (ok && found) {
        for (int id : periodic_by_phase_[static_cast<std::size_t>(start % period_)]) {
            const auto& p = periodic_[static_cast<std::size_t>(id)];
            if (p.active && p.alloc.rbs.overlap(block) > 0)
                ok = false;
        }
        ok = ok && is_free(start, block);
    } else {
        ok = false;
    }
    if (!ok)
        throw std::logic_error("periodic double allocation on " + carrier_ + " at tti " + std::to_string(start));
    const int id = static_cast<int>(periodic_.size());
    periodic_.push_back(Periodic{start, Allocation{block, owner, purpose}, true});
    periodic_by_phase_[static_cast<std::size_t>(start % period_)].push_back(id);
    return id;
}

void ResourceGrid::release_periodic(int id)
{
    periodic_.at(static_cast<std::size_t>(id)).active = false;
}

std::vector<char> ResourceGrid::occupancy(Tti tti) const
{
    std::vector<char> occ(static_cast<std::size_t>(rbs_per_tti_), 0);
    for (const auto& a : allocations(tti))
        mark(occ, a.rbs);
    return occ;
}

std::vector<Allocation> ResourceGrid::allocations(Tti tti) const
{
    std::vector<Allocation> out;
    if (auto it = one_off_.find(tti); it != one_off_.end())
        out = it->second;
    for (int id : periodic_by_phase_[static_cast<std::size_t>(tti % period_)]) {
        const auto& p = periodic_[static_cast<std::size_t>(id)];
        if (periodic_active(p, tti))
            out.push_back(p.alloc);
    }
    return out;
}

void ResourceGrid::prune_before(Tti tti)
{
    one_off_.erase(one_off_.begin(), one_off_.lower_bound(tti));
}

void ResourceGrid::trace_tti(Tti tti) const
{
    if (!trace_)
        return;
    auto active = allocations(tti);
    std::sort(active.begin(), active.end(),
              [](const Allocation& a, const Allocation& b) { return a.rbs.first < b.rbs.first; });
    for (const auto& a : active) {
        for (int rb = a.rbs.first; rb < a.rbs.end(); ++rb)
            trace_(TraceRow{tti, carrier_, rb, a.owner, a.purpose});
    }
}

} // namespace v2x
