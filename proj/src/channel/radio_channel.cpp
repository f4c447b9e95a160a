#include "v2x/channel/radio_channel.hpp"

#include <algorithm>
#include <cmath>

#include "v2x/engine/rng.hpp"

namespace v2x {

RadioChannel::RadioChannel(const Scenario& scenario, const MadridGrid& grid, const SectorSite& site,
                           std::uint64_t master_seed)
    : sc_(scenario), grid_(grid), site_(site), v2v_(scenario.carriers.pc5_frequency),
      uma_(scenario.carriers.uu_frequency, scenario.grid.street_width, scenario.grid.building_height),
      shadowing_(derive_seed(master_seed, "shadowing"), scenario.channel.shadowing),
      los_seed_(derive_seed(master_seed, "uu-los"))
{
    const auto& c = scenario.carriers;
    const auto& r = scenario.radio;
    // Both powers are quoted per 10 MHz carrier and spread evenly over its RBs,
    // so a vehicle keeps the same power spectral density on any allocation.
    const double rbs = static_cast<double>(c.rbs_per_tti);
    ue_rb_dbm_ = r.ue_power_dbm - 10.0 * std::log10(rbs);
    bs_rb_dbm_ = r.bs_power_dbm - 10.0 * std::log10(rbs);
    ue_noise_rb_dbm_ = thermal_noise_dbm(c.rb_bandwidth, r.ue_noise_figure);
    bs_noise_rb_dbm_ = thermal_noise_dbm(c.rb_bandwidth, r.bs_noise_figure);
}

void RadioChannel::refresh(const std::vector<Ue>& ues)
{
    v2v_cache_.clear();
    uu_.assign(ues.size(), UuLink{});
    const auto& r = sc_.radio;
    for (const auto& ue : ues) {
        auto& link = uu_[static_cast<std::size_t>(ue.id)];
        const Vec2 rel = site_.position + grid_.displacement(site_.position, ue.position);
        const double d2d = norm(rel - site_.position);
        link.los = hashed_uniform(los_seed_, static_cast<std::uint64_t>(ue.id)) < UmaPathloss::los_probability(d2d);
        const auto cls = link.los ? LinkClass::Los : LinkClass::Nlos;
        const double pl = uma_.loss_db({site_.position, site_.antenna_height}, {rel, ue.antenna_height}, cls);
        const double sigma = link.los ? sc_.channel.uu_sigma_los : sc_.channel.uu_sigma_nlos;
        // Key 0 of the pair is the site; vehicles are shifted by one.
        link.path_gain_db = -pl - shadowing_.value_db(Shadowing::Kind::Uu, 0,
                                                      static_cast<std::uint64_t>(ue.id) + 1, sigma);
        for (int s = 0; s < SectorSite::kSectors; ++s) {
            link.sector_gain_db[static_cast<std::size_t>(s)] =
                sector_gain(site_, s, rel, r.bs_antenna_gain, r.bs_beamwidth_deg, r.bs_max_attenuation);
        }
    }
}

LinkClass RadioChannel::v2v_class(const Ue& a, const Ue& b) const
{
    return grid_.classify_los(a.position, b.position);
}

double RadioChannel::v2v_gain_db(const Ue& a, const Ue& b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a.id, b.id));
    const auto hi = static_cast<std::uint64_t>(std::max(a.id, b.id));
    const std::uint64_t key = (lo << 32) | hi;
    if (auto it = v2v_cache_.find(key); it != v2v_cache_.end())
        return it->second;
    // Evaluate from the lower id so that the value is symmetric by construction.
    const Ue& tx = a.id < b.id ? a : b;
    const Ue& rx = a.id < b.id ? b : a;
    const auto cls = v2v_class(tx, rx);
    const Vec2 rel = tx.position + grid_.displacement(tx.position, rx.position);
    const double pl = v2v_.loss_db({tx.position, tx.antenna_height}, {rel, rx.antenna_height}, cls);
    const double sigma = cls == LinkClass::Los ? sc_.channel.v2v_sigma_los : sc_.channel.v2v_sigma_nlos;
    const double gain = -pl - shadowing_.value_db(Shadowing::Kind::V2v, lo, hi, sigma);
    v2v_cache_.emplace(key, gain);
    return gain;
}

int RadioChannel::best_sector(UeId ue) const
{
    const auto& g = uu_[static_cast<std::size_t>(ue)].sector_gain_db;
    return static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
}

std::uint64_t RadioChannel::clamp_count() const noexcept
{
    return v2v_.clamp_count() + uma_.clamp_count();
}

} // namespace v2x
