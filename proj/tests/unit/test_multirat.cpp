#include <doctest.h>

#include <optional>

#include "v2x/engine/rng.hpp"
#include "v2x/multirat/merge.hpp"

using namespace v2x;

TEST_CASE("the earlier leg wins")
{
    const auto a = merge_outcomes(12, 30, 100);
    CHECK(a.delivered);
    CHECK(a.latency == 12);
    CHECK(a.winner == Winner::Pc5);
    const auto b = merge_outcomes(40, 9, 100);
    CHECK(b.latency == 9);
    CHECK(b.winner == Winner::Uu);
}

TEST_CASE("a tie goes to the sidelink")
{
    const auto t = merge_outcomes(7, 7, 100);
    CHECK(t.winner == Winner::Pc5);
    CHECK(t.latency == 7);
}

TEST_CASE("one leg alone is enough")
{
    CHECK(merge_outcomes(std::nullopt, 20, 100).winner == Winner::Uu);
    CHECK(merge_outcomes(20, std::nullopt, 100).winner == Winner::Pc5);
    const auto none = merge_outcomes(std::nullopt, std::nullopt, 100);
    CHECK_FALSE(none.delivered);
    CHECK(none.winner == Winner::None);
}

TEST_CASE("deliveries past the bound do not count")
{
    const auto late = merge_outcomes(101, std::nullopt, 100);
    CHECK_FALSE(late.delivered);
    const auto mixed = merge_outcomes(101, 100, 100);
    CHECK(mixed.winner == Winner::Uu);
    CHECK(mixed.latency == 100);
}

TEST_CASE("union of successes: the merge dominates either leg")
{
    RngStream r(17, "test");
    for (int i = 0; i < 5000; ++i) {
        std::optional<std::int64_t> a, b;
        if (r.uniform() < 0.7)
            a = r.uniform_int(1, 120);
        if (r.uniform() < 0.7)
            b = r.uniform_int(1, 120);
        const auto m = merge_outcomes(a, b, 100);
        const bool a_ok = a && *a <= 100;
        const bool b_ok = b && *b <= 100;
        REQUIRE(m.delivered == (a_ok || b_ok));
        if (a_ok)
            REQUIRE(m.latency <= *a);
        if (b_ok)
            REQUIRE(m.latency <= *b);
    }
}
