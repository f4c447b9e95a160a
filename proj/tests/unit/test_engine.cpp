#include <doctest.h>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2x/engine/event_queue.hpp"
#include "v2x/engine/rng.hpp"
#include "v2x/engine/scenario.hpp"

using namespace v2x;

TEST_CASE("events fire in time order, ties in insertion order")
{
    EventQueue q;
    std::vector<int> order;
    q.schedule(5, [&] { order.push_back(3); });
    q.schedule(2, [&] { order.push_back(1); });
    q.schedule(5, [&] { order.push_back(4); });
    q.schedule(2, [&] { order.push_back(2); });
    while (q.step()) {
    }
    CHECK(order == std::vector<int>{1, 2, 3, 4});
    CHECK(q.now() == 5);
    CHECK(q.executed() == 4);
}

TEST_CASE("an event may schedule at the current time and still runs")
{
    EventQueue q;
    std::vector<Tti> seen;
    q.schedule(3, [&] {
        seen.push_back(q.now());
        q.schedule(q.now(), [&] { seen.push_back(q.now()); });
    });
    q.run_until(10);
    CHECK(seen == std::vector<Tti>{3, 3});
    CHECK(q.now() == 10);
}

TEST_CASE("run_until leaves later events pending")
{
    EventQueue q;
    int fired = 0;
    q.schedule(4, [&] { ++fired; });
    q.schedule(8, [&] { ++fired; });
    q.run_until(4);
    CHECK(fired == 1);
    CHECK(q.pending() == 1);
}

TEST_CASE("scheduling in the past is rejected")
{
    EventQueue q;
    q.schedule(5, [] {});
    q.run_until(5);
    CHECK_THROWS_AS(q.schedule(4, [] {}), std::invalid_argument);
}

TEST_CASE("named streams are reproducible and independent")
{
    RngStream a(42, "drop");
    RngStream b(42, "drop");
    RngStream c(42, "mobility");
    std::vector<double> va, vb, vc;
    for (int i = 0; i < 20; ++i) {
        va.push_back(a.uniform());
        vb.push_back(b.uniform());
        vc.push_back(c.uniform());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(derive_seed(1, "x") != derive_seed(2, "x"));
}

TEST_CASE("hashed uniform is a pure function in [0, 1)")
{
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = hashed_uniform(7, i, 3, 9);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == hashed_uniform(7, i, 3, 9));
    }
    CHECK(hashed_uniform(7, 1) != hashed_uniform(8, 1));
}

TEST_CASE("uniform_int covers both ends")
{
    RngStream r(3, "traffic");
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = r.uniform_int(0, 9);
        REQUIRE(v >= 0);
        REQUIRE(v <= 9);
        seen.insert(v);
    }
    CHECK(seen.size() == 10);
}

namespace {

std::string error_of(const std::string& text)
{
    try {
        (void)load_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("figure-style scenarios resolve")
{
    const auto a = load_scenario(R"({"density": 1000, "range": 200, "scheme": "pc5"})");
    CHECK(a.range == 200.0);
    CHECK(a.density == 1000.0);
    CHECK(a.scheme == Scheme::Pc5);
    const auto b = load_scenario(R"({"density": 500, "range": 300, "scheme": "uu-multicast"})");
    CHECK(b.range == 300.0);
    CHECK(b.density == 500.0);
    CHECK(b.latency_bound == 100);
    CHECK(b.inter_bs_delay == 1);
    CHECK(b.phy.harq_rtt == 7);
    CHECK(b.traffic.period == 100);
    CHECK(b.traffic.payload == 212);
}

TEST_CASE("invalid scenarios name the offending key")
{
    CHECK(error_of(R"({"density": 0, "range": 200, "scheme": "pc5"})") == "density must be positive");
    CHECK(error_of(R"({"range": 200, "scheme": "pc5"})") == "missing required key 'density'");
    CHECK(error_of(R"({"density": 10, "range": 200, "scheme": "pc5", "rnage": 1})") == "unknown key 'rnage'");
    CHECK(error_of(R"({"density": 10, "range": 200, "scheme": "lte"})").find("valid schemes") != std::string::npos);
    CHECK(error_of(R"({"density": 10, "range": 200, "scheme": "pc5", "duration": 1, "warmup": 1})") != "");
    CHECK(error_of(R"({"density": 10, "range": 200, "scheme": "pc5", "schemes": ["pc5", "pc5"]})") != "");
    CHECK(error_of("{\"density\": 10,\n  \"range\": }").find("line 2") != std::string::npos);
}

TEST_CASE("comments are accepted in config files")
{
    const auto s = load_scenario("{\n // note\n \"density\": 5, \"range\": 50, \"scheme\": \"pc5\" /* x */ }");
    CHECK(s.density == 5.0);
}

TEST_CASE("overrides set nested keys and parse values as JSON")
{
    auto doc = parse_config_text(R"({"density": 10, "range": 200, "scheme": "pc5"})");
    apply_override(doc, "scheme", "multirat-multicast");
    apply_override(doc, "mac.sr_period", "10");
    apply_override(doc, "sps", "false");
    const auto s = resolve_scenario(doc);
    CHECK(s.scheme == Scheme::MultiratMulticast);
    CHECK(s.mac.sr_period == 10);
    CHECK_FALSE(s.sps);
}

TEST_CASE("environment overrides use the prefix and double underscores")
{
    auto doc = parse_config_text(R"({"density": 10, "range": 200, "scheme": "pc5"})");
    std::string a = "V2XSIM_RANGE=150";
    std::string b = "V2XSIM_MAC__SR_PERIOD=20";
    std::string c = "HOME=/root";
    char* env[] = {a.data(), b.data(), c.data(), nullptr};
    apply_env_overrides(doc, env);
    const auto s = resolve_scenario(doc);
    CHECK(s.range == 150.0);
    CHECK(s.mac.sr_period == 20);
}

TEST_CASE("effective configuration round-trips")
{
    const auto s = load_scenario(R"({"density": 10, "range": 200, "scheme": "pc5", "schemes": ["pc5", "uu-unicast"]})");
    const auto again = resolve_scenario(to_json(s));
    CHECK(to_json(again) == to_json(s));
    CHECK(to_json(s)["channel"]["v2v_model"] == "winner-b1-manhattan");
    CHECK(again.active_schemes() == std::vector<Scheme>{Scheme::Pc5, Scheme::UuUnicast});
}

TEST_CASE("suspicious but valid settings produce warnings")
{
    auto s = load_scenario(R"({"density": 10, "range": 400, "scheme": "pc5", "warmup": 0})");
    CHECK(scenario_warnings(s).size() >= 2);
}

TEST_CASE("scheme predicates")
{
    CHECK(uses_pc5(Scheme::MultiratUnicast));
    CHECK(uses_uu(Scheme::MultiratUnicast));
    CHECK_FALSE(uses_embms(Scheme::MultiratUnicast));
    CHECK(uses_embms(Scheme::UuMulticast));
    CHECK_FALSE(uses_uu(Scheme::Pc5));
    for (Scheme s : all_schemes())
        CHECK(parse_scheme(to_string(s)) == s);
}
