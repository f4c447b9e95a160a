#include "v2x/channel/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "v2x/engine/rng.hpp"

namespace v2x {

double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double lin) noexcept
{
    return 10.0 * std::log10(lin);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) noexcept
{
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double sector_relative_gain(double theta_deg, double beamwidth_deg, double max_attenuation_db) noexcept
{
    double t = std::fmod(theta_deg, 360.0);
    if (t > 180.0)
        t -= 360.0;
    else if (t < -180.0)
        t += 360.0;
    const double r = t / beamwidth_deg;
    return -std::min(12.0 * r * r, max_attenuation_db);
}

double sector_gain(const SectorSite& site, int sector, Vec2 ue, double boresight_gain_db, double beamwidth_deg,
                   double max_attenuation_db) noexcept
{
    const Vec2 d = ue - site.position;
    const double azimuth = std::atan2(d.y, d.x) * 180.0 / std::numbers::pi;
    return boresight_gain_db +
           sector_relative_gain(azimuth - site.azimuths_deg[static_cast<std::size_t>(sector)], beamwidth_deg,
                                max_attenuation_db);
}

double Shadowing::value_db(Kind kind, std::uint64_t a, std::uint64_t b, double sigma_db) const noexcept
{
    if (!enabled_ || sigma_db == 0.0)
        return 0.0;
    return sigma_db * hashed_normal(seed_, static_cast<std::uint64_t>(kind), std::min(a, b), std::max(a, b));
}

LinkSample compute_sinr(double received_dbm, std::span<const Interferer> interferers, double noise_dbm)
{
    LinkSample s;
    s.received_dbm = received_dbm;
    s.noise_dbm = noise_dbm;
    double i_mw = 0.0;
    for (const auto& in : interferers) {
        if (in.overlap_rbs <= 0)
            continue;
        const double share = static_cast<double>(in.overlap_rbs) / static_cast<double>(in.rbs);
        i_mw += db_to_linear(in.received_dbm) * share;
    }
    const double n_mw = db_to_linear(noise_dbm);
    if (i_mw > 0.0)
        s.interference_dbm = linear_to_db(i_mw);
    s.sinr_db = received_dbm - linear_to_db(i_mw + n_mw);
    return s;
}

LinkSample compute_sinr(double received_dbm, std::span<const double> interferers_dbm, double noise_dbm)
{
    LinkSample s;
    s.received_dbm = received_dbm;
    s.noise_dbm = noise_dbm;
    double i_mw = 0.0;
    for (double p : interferers_dbm)
        i_mw += db_to_linear(p);
    if (i_mw > 0.0)
        s.interference_dbm = linear_to_db(i_mw);
    s.sinr_db = received_dbm - linear_to_db(i_mw + db_to_linear(noise_dbm));
    return s;
}

} // namespace v2x
