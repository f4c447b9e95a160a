#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "v2x/channel/link_budget.hpp"
#include "v2x/channel/pathloss.hpp"
#include "v2x/engine/scenario.hpp"

namespace v2x {

/// Large-scale channel of one run: pathloss, frozen shadowing and antenna
/// gains for vehicle-to-vehicle (PC5) and vehicle-to-site (Uu) links.
///
/// Path gains are cached per mobility epoch; call refresh() after every
/// position update.
class RadioChannel
{
public:
    RadioChannel(const Scenario& scenario, const MadridGrid& grid, const SectorSite& site, std::uint64_t master_seed);

    /// Recomputes the per-vehicle Uu quantities and drops the V2V cache.
    void refresh(const std::vector<Ue>& ues);

    /// -pathloss - shadowing (dB) between two vehicles on the PC5 carrier.
    double v2v_gain_db(const Ue& a, const Ue& b);
    LinkClass v2v_class(const Ue& a, const Ue& b) const;

    /// -pathloss - shadowing (dB) between the site and a vehicle on the Uu carrier.
    double uu_gain_db(UeId ue) const { return uu_[static_cast<std::size_t>(ue)].path_gain_db; }
    /// Antenna gain of `sector` towards the vehicle, boresight gain included.
    double sector_gain_db(UeId ue, int sector) const
    {
        return uu_[static_cast<std::size_t>(ue)].sector_gain_db[static_cast<std::size_t>(sector)];
    }
    bool uu_los(UeId ue) const { return uu_[static_cast<std::size_t>(ue)].los; }
    /// Sector with the strongest downlink, i.e. the highest antenna gain.
    int best_sector(UeId ue) const;

    double ue_rb_power_dbm() const noexcept { return ue_rb_dbm_; }
    double bs_rb_power_dbm() const noexcept { return bs_rb_dbm_; }
    double ue_rb_noise_dbm() const noexcept { return ue_noise_rb_dbm_; }
    double bs_rb_noise_dbm() const noexcept { return bs_noise_rb_dbm_; }

    /// Distances clamped to a model floor so far.
    std::uint64_t clamp_count() const noexcept;

private:
    struct UuLink
    {
        double path_gain_db = 0.0;
        std::array<double, SectorSite::kSectors> sector_gain_db{};
        bool los = false;
    };

    const Scenario& sc_;
    const MadridGrid& grid_;
    const SectorSite& site_;
    ManhattanV2vPathloss v2v_;
    UmaPathloss uma_;
    Shadowing shadowing_;
    std::uint64_t los_seed_;
    std::vector<UuLink> uu_;
    std::unordered_map<std::uint64_t, double> v2v_cache_;
    double ue_rb_dbm_;
    double bs_rb_dbm_;
    double ue_noise_rb_dbm_;
    double bs_noise_rb_dbm_;
};

} // namespace v2x
