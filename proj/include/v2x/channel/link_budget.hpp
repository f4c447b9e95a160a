#pragma once

#include <cstdint>
#include <span>

#include "v2x/environment/deployment.hpp"

namespace v2x {

double db_to_linear(double db) noexcept;
double linear_to_db(double lin) noexcept;

/// Thermal noise (-174 dBm/Hz) plus noise figure over `bandwidth_hz`.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db) noexcept;

/// Parabolic sector pattern A(theta) = -min(12 (theta/theta_3dB)^2, A_m), in dB
/// relative to boresight. `theta_deg` is wrapped into [-180, 180].
double sector_relative_gain(double theta_deg, double beamwidth_deg = 70.0, double max_attenuation_db = 25.0) noexcept;

/// Absolute gain (boresight gain plus pattern) of `sector` towards `ue`.
double sector_gain(const SectorSite& site, int sector, Vec2 ue, double boresight_gain_db,
                   double beamwidth_deg = 70.0, double max_attenuation_db = 25.0) noexcept;

/// Frozen log-normal shadowing. The value of a link is a pure function of the
/// seed and the unordered link key, so repeated queries return the same value.
class Shadowing
{
public:
    enum class Kind : std::uint64_t
    {
        V2v = 1,
        Uu = 2,
    };

    Shadowing(std::uint64_t seed, bool enabled) : seed_(seed), enabled_(enabled) {}

    double value_db(Kind kind, std::uint64_t a, std::uint64_t b, double sigma_db) const noexcept;

private:
    std::uint64_t seed_;
    bool enabled_;
};

struct LinkSample
{
    std::int64_t tx = -1;
    std::int64_t rx = -1;
    std::int64_t tti = 0;
    double received_dbm = 0.0;
    double interference_dbm = -1e300; // -inf stand-in for "no interference"
    double noise_dbm = 0.0;
    double sinr_db = 0.0;
};

/// Interferer as seen on the desired allocation: its received power over its
/// own RBs and the number of those RBs overlapping the desired allocation.
struct Interferer
{
    double received_dbm = 0.0;
    int rbs = 1;
    int overlap_rbs = 1;
};

/// SINR of a desired signal against partially overlapping interferers.
/// `received_dbm` and `noise_dbm` are totals over the desired allocation;
/// each interferer contributes the share of its power that lands on it.
LinkSample compute_sinr(double received_dbm, std::span<const Interferer> interferers, double noise_dbm);

/// Plain form: interferers fully overlapping the desired allocation.
LinkSample compute_sinr(double received_dbm, std::span<const double> interferers_dbm, double noise_dbm);

} // namespace v2x
