#include <doctest.h>

#include <cmath>
#include <vector>

#include "v2x/channel/link_budget.hpp"
#include "v2x/channel/pathloss.hpp"
#include "v2x/channel/radio_channel.hpp"
#include "v2x/engine/rng.hpp"
#include "v2x/engine/scenario.hpp"
#include "v2x/environment/deployment.hpp"

using namespace v2x;

// Reference values below were computed independently from the closed-form
// model expressions (double precision, Python) and frozen.

TEST_CASE("v2v los pathloss goldens at 5.9 GHz")
{
    const ManhattanV2vPathloss m(5.9e9);
    CHECK(m.los_db(100.0) == doctest::Approx(87.83764014612251).epsilon(1e-12));
    CHECK(m.los_db(250.0) == doctest::Approx(96.87087834297776).epsilon(1e-12));
    CHECK(m.reference_loss() == doctest::Approx(65.13764014612251).epsilon(1e-12));
}

TEST_CASE("v2v nlos corner pathloss goldens")
{
    const ManhattanV2vPathloss m(5.9e9);
    CHECK(m.nlos_db(100.0, 50.0) == doctest::Approx(119.54691827904296).epsilon(1e-12));
    CHECK(m.nlos_db(50.0, 100.0) == doctest::Approx(119.54691827904296).epsilon(1e-12));
    CHECK(m.nlos_db(200.0, 30.0) == doctest::Approx(120.15588017910942).epsilon(1e-12));
}

TEST_CASE("v2v pathloss is monotone in distance and nlos is never below los")
{
    const ManhattanV2vPathloss m(5.9e9);
    double prev = m.los_db(1.0);
    for (double d = 1.0; d <= 1000.0; d += 0.5) {
        const double v = m.los_db(d);
        REQUIRE(v >= prev);
        prev = v;
    }
    for (double d1 = 5.0; d1 < 400.0; d1 += 17.0) {
        for (double d2 = 5.0; d2 < 400.0; d2 += 13.0)
            REQUIRE(m.nlos_db(d1, d2) >= m.los_db(std::hypot(d1, d2)) - 1e-9);
    }
}

TEST_CASE("distances below the floor are clamped and counted")
{
    const ManhattanV2vPathloss m(5.9e9);
    CHECK(m.los_db(0.5) == doctest::Approx(m.los_db(m.distance_floor())));
    CHECK(m.clamp_count() == 1);
}

TEST_CASE("urban macro goldens at 2 GHz")
{
    const UmaPathloss m(2.0e9, 21.0, 22.0);
    const double d3 = std::hypot(200.0, 23.5);
    CHECK(m.los_db(d3, 25.0, 1.5) == doctest::Approx(84.70876442487508).epsilon(1e-12));
    CHECK(m.nlos_db(d3, 25.0, 1.5) == doctest::Approx(110.47579125337984).epsilon(1e-12));
    // Continuous at the breakpoint, 320.2 m for these heights.
    const double bp = 4.0 * 24.0 * 0.5 * 2.0e9 / kSpeedOfLight;
    CHECK(m.los_db(bp + 1e-6, 25.0, 1.5) == doctest::Approx(m.los_db(bp - 1e-6, 25.0, 1.5)).epsilon(1e-6));
    CHECK(UmaPathloss::los_probability(10.0) == doctest::Approx(1.0));
    CHECK(UmaPathloss::los_probability(100.0) ==
          doctest::Approx(0.18 * (1 - std::exp(-100.0 / 63)) + std::exp(-100.0 / 63)).epsilon(1e-12));
}

TEST_CASE("noise per resource block")
{
    CHECK(thermal_noise_dbm(180e3, 9.0) == doctest::Approx(-112.44727494896694).epsilon(1e-12));
    CHECK(thermal_noise_dbm(10e6, 0.0) == doctest::Approx(-174.0 + 70.0).epsilon(1e-12));
}

TEST_CASE("db conversions invert each other")
{
    for (double db = -50.0; db <= 50.0; db += 3.7)
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
}

TEST_CASE("sinr goldens")
{
    const std::vector<double> one{-85.0};
    CHECK(compute_sinr(-80.0, one, -95.0).sinr_db == doctest::Approx(4.586073148417739).epsilon(1e-12));
    CHECK(compute_sinr(-80.0, std::vector<double>{}, -95.0).sinr_db == doctest::Approx(15.0));
    // Half of a 10-RB interferer lands on the desired allocation: 3 dB less interference.
    const std::vector<Interferer> partial{{-82.0, 10, 5}};
    CHECK(compute_sinr(-80.0, partial, -1000.0).sinr_db == doctest::Approx(2.0 + 10 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("sector pattern")
{
    CHECK(sector_relative_gain(0.0) == doctest::Approx(0.0));
    CHECK(sector_relative_gain(35.0) == doctest::Approx(-3.0));
    CHECK(sector_relative_gain(90.0) == doctest::Approx(-12.0 * (90.0 / 70.0) * (90.0 / 70.0)));
    CHECK(sector_relative_gain(180.0) == doctest::Approx(-25.0));
    CHECK(sector_relative_gain(-35.0) == doctest::Approx(sector_relative_gain(325.0)));
}

TEST_CASE("shadowing is frozen per link and symmetric")
{
    const Shadowing sh(11, true);
    CHECK(sh.value_db(Shadowing::Kind::V2v, 3, 8, 3.0) == sh.value_db(Shadowing::Kind::V2v, 8, 3, 3.0));
    CHECK(sh.value_db(Shadowing::Kind::V2v, 3, 8, 3.0) != sh.value_db(Shadowing::Kind::Uu, 3, 8, 3.0));
    const Shadowing off(11, false);
    CHECK(off.value_db(Shadowing::Kind::V2v, 3, 8, 3.0) == 0.0);

    double sum = 0.0;
    double sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = sh.value_db(Shadowing::Kind::V2v, static_cast<std::uint64_t>(i), 100000, 3.0);
        sum += v;
        sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.1);
    CHECK(std::sqrt(sq / n) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("radio channel gains are symmetric and stable")
{
    auto sc = load_scenario(R"({"density": 300, "range": 200, "scheme": "pc5", "geometry": {"building_size": 104}})");
    const auto grid = build_grid(1, 1, sc.grid);
    const auto site = make_site(grid, sc.radio.bs_height);
    RngStream drop(3, "drop");
    auto ues = drop_vehicles(grid, sc.density, drop);
    RadioChannel ch(sc, grid, site, 3);
    ch.refresh(ues);
    REQUIRE(ues.size() > 10);
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = i + 1; j < 10; ++j) {
            const double g = ch.v2v_gain_db(ues[i], ues[j]);
            CHECK(g == ch.v2v_gain_db(ues[j], ues[i]));
            CHECK(g < 0.0);
        }
        const auto id = ues[i].id;
        CHECK(ch.sector_gain_db(id, ch.best_sector(id)) >= ch.sector_gain_db(id, (ch.best_sector(id) + 1) % 3));
    }
    CHECK(ch.ue_rb_power_dbm() == doctest::Approx(24.0 - 10 * std::log10(50.0)));
    CHECK(ch.bs_rb_power_dbm() == doctest::Approx(46.0 - 10 * std::log10(50.0)));
    CHECK(ch.bs_rb_noise_dbm() == doctest::Approx(thermal_noise_dbm(180e3, 5.0)));
}
