#include "v2x/engine/rng.hpp"

#include <cmath>
#include <numbers>

namespace v2x {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// 53 random bits mapped to [0, 1).
double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) noexcept
{
    return splitmix64(splitmix64(master) ^ fnv1a(name));
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view name)
    : name_(name), seed_(derive_seed(master_seed, name)), engine_(seed_)
{
}

double RngStream::uniform()
{
    return to_unit(engine_());
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi)
{
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    return dist(engine_);
}

double RngStream::normal(double mean, double stddev)
{
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
}

std::uint64_t RngStream::poisson(double mean)
{
    if (mean <= 0.0)
        return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
}

double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept
{
    std::uint64_t h = splitmix64(seed ^ splitmix64(a));
    h = splitmix64(h ^ splitmix64(b + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ splitmix64(c + 0x85157af5ULL));
    return to_unit(h);
}

double hashed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept
{
    // Shift u1 into (0, 1] so the log is finite.
    const double u1 = 1.0 - hashed_uniform(seed, a, b, c);
    const double u2 = hashed_uniform(seed ^ 0xd1b54a32d192ed03ULL, a, b, c);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace v2x
