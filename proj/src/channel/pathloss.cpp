#include "v2x/channel/pathloss.hpp"

#include <algorithm>
#include <cmath>

namespace v2x {

ManhattanV2vPathloss::ManhattanV2vPathloss(double frequency_hz) : frequency_(frequency_hz)
{
    ref_loss_ = 22.7 * std::log10(ref_distance_) + 41.0 + 20.0 * std::log10(frequency_ / 5.0e9);
}

double ManhattanV2vPathloss::los_db(double distance_m) const
{
    const double d = clamp(distance_m, floor_);
    return ref_loss_ + 10.0 * exponent_ * std::log10(d / ref_distance_);
}

double ManhattanV2vPathloss::corner_db(double dk, double dl) const
{
    const double nj = std::max(2.8 - 0.0024 * dk, 1.84);
    return los_db(dk) + 20.0 - 12.5 * nj + 10.0 * nj * std::log10(dl) + 3.0 * std::log10(frequency_ / 5.0e9);
}

double ManhattanV2vPathloss::nlos_db(double d1_m, double d2_m) const
{
    const double d1 = clamp(d1_m, floor_);
    const double d2 = clamp(d2_m, floor_);
    const double corner = std::min(corner_db(d1, d2), corner_db(d2, d1));
    return std::max(corner, los_db(std::hypot(d1, d2)));
}

double ManhattanV2vPathloss::loss_db(const Endpoint& tx, const Endpoint& rx, LinkClass cls) const
{
    const Vec2 d = rx.position - tx.position;
    if (cls == LinkClass::Los)
        return los_db(norm(d));
    return nlos_db(std::abs(d.x), std::abs(d.y));
}

UmaPathloss::UmaPathloss(double frequency_hz, double street_width, double building_height)
    : frequency_(frequency_hz), street_width_(street_width), building_height_(building_height)
{
}

double UmaPathloss::los_db(double d3d, double h_bs, double h_ut) const
{
    const double d = clamp(d3d, floor_);
    const double fc_ghz = frequency_ / 1e9;
    const double d_bp = 4.0 * (h_bs - 1.0) * std::max(h_ut - 1.0, 0.1) * frequency_ / kSpeedOfLight;
    auto near = [&](double x) { return 22.0 * std::log10(x) + 28.0 + 20.0 * std::log10(fc_ghz); };
    if (d <= d_bp)
        return near(d);
    return near(d_bp) + 40.0 * std::log10(d / d_bp);
}

double UmaPathloss::nlos_db(double d3d, double h_bs, double h_ut) const
{
    const double d = clamp(d3d, floor_);
    const double fc_ghz = frequency_ / 1e9;
    const double w = street_width_;
    const double h = building_height_;
    const double nlos = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                        (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
                        (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d) - 3.0) + 20.0 * std::log10(fc_ghz) -
                        (3.2 * std::pow(std::log10(11.75 * h_ut), 2) - 4.97);
    return std::max(nlos, los_db(d, h_bs, h_ut));
}

double UmaPathloss::loss_db(const Endpoint& tx, const Endpoint& rx, LinkClass cls) const
{
    const double d2d = norm(rx.position - tx.position);
    const double dh = tx.height - rx.height;
    const double d3d = std::hypot(d2d, dh);
    const double h_bs = std::max(tx.height, rx.height);
    const double h_ut = std::min(tx.height, rx.height);
    return cls == LinkClass::Los ? los_db(d3d, h_bs, h_ut) : nlos_db(d3d, h_bs, h_ut);
}

double UmaPathloss::los_probability(double d2d)
{
    const double d = std::max(d2d, 1e-9);
    return std::min(18.0 / d, 1.0) * (1.0 - std::exp(-d / 63.0)) + std::exp(-d / 63.0);
}

} // namespace v2x
