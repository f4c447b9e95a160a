#pragma once

#include <cstdint>

#include "v2x/environment/madrid_grid.hpp"

namespace v2x {

/// Link end: ground position and antenna height.
struct Endpoint
{
    Vec2 position;
    double height = 1.5;
};

constexpr double kSpeedOfLight = 299792458.0;

/// Pathloss model interface. Implementations clamp distances below their
/// validity floor and count how often that happened.
class PathlossModel
{
public:
    virtual ~PathlossModel() = default;

    /// Pathloss in dB for the given geometry class. `rx.position` must already
    /// be expressed in the same (unwrapped) frame as `tx.position`.
    virtual double loss_db(const Endpoint& tx, const Endpoint& rx, LinkClass cls) const = 0;

    std::uint64_t clamp_count() const noexcept { return clamps_; }

protected:
    double clamp(double d, double floor) const
    {
        if (d < floor) {
            ++clamps_;
            return floor;
        }
        return d;
    }

private:
    mutable std::uint64_t clamps_ = 0;
};

/// Vehicle-to-vehicle model for a Manhattan street grid (WINNER II / WINNER+
/// B1 form).
///
/// LOS:  PL(d) = ref_loss + 10 * exponent * log10(d / ref_distance), with
///       ref_loss = 22.7 log10(ref_distance) + 41 + 20 log10(f / 5 GHz).
/// NLOS: corner diffraction with street distances d1 = |dx|, d2 = |dy|:
///       PL(dk, dl) = PL_LOS(dk) + 20 - 12.5 nj + 10 nj log10(dl) + 3 log10(f / 5 GHz),
///       nj = max(2.8 - 0.0024 dk, 1.84), PL_NLOS = min over both corner
///       orderings, never below PL_LOS of the direct distance.
class ManhattanV2vPathloss final : public PathlossModel
{
public:
    explicit ManhattanV2vPathloss(double frequency_hz);

    double loss_db(const Endpoint& tx, const Endpoint& rx, LinkClass cls) const override;

    double los_db(double distance_m) const;
    double nlos_db(double d1_m, double d2_m) const;

    double frequency() const noexcept { return frequency_; }
    double reference_distance() const noexcept { return ref_distance_; }
    double reference_loss() const noexcept { return ref_loss_; }
    double exponent() const noexcept { return exponent_; }
    double distance_floor() const noexcept { return floor_; }

private:
    double corner_db(double dk, double dl) const;

    double frequency_;
    double ref_distance_ = 10.0;
    double exponent_ = 2.27;
    double ref_loss_;
    double floor_ = 3.0;
};

/// 3GPP urban-macro pair (TR 36.814 UMa) at the Uu carrier.
///
/// LOS:  22 log10(d) + 28 + 20 log10(fc_GHz) up to the breakpoint
///       d_bp = 4 h'_bs h'_ut f / c (h' = h - 1 m), then +40 log10(d / d_bp).
/// NLOS: 161.04 - 7.1 log10(W) + 7.5 log10(h) - (24.37 - 3.7 (h/h_bs)^2) log10(h_bs)
///       + (43.42 - 3.1 log10(h_bs)) (log10(d) - 3) + 20 log10(fc_GHz)
///       - (3.2 (log10(11.75 h_ut))^2 - 4.97), floored at the LOS value.
/// d is the 3-D distance, floored at 10 m.
class UmaPathloss final : public PathlossModel
{
public:
    UmaPathloss(double frequency_hz, double street_width, double building_height);

    double loss_db(const Endpoint& tx, const Endpoint& rx, LinkClass cls) const override;

    double los_db(double d3d, double h_bs, double h_ut) const;
    double nlos_db(double d3d, double h_bs, double h_ut) const;

    /// LOS probability over the 2-D distance (UMa, UE height <= 13 m).
    static double los_probability(double d2d);

    double distance_floor() const noexcept { return floor_; }

private:
    double frequency_;
    double street_width_;
    double building_height_;
    double floor_ = 10.0;
};

} // namespace v2x
