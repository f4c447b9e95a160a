#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace v2x {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the stream `name` under `master`. Identical inputs give identical
/// seeds; different names give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name) noexcept;

/// Named, seeded random stream. Each consumer in a run owns its own stream so
/// that adding draws in one place never shifts the sequence seen by another.
class RngStream
{
public:
    RngStream(std::uint64_t master_seed, std::string_view name);

    const std::string& name() const noexcept { return name_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double normal(double mean, double stddev);
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::string name_;
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Counter-based uniform in [0, 1): a pure function of (seed, a, b, c). Used
/// for per-link frozen quantities that must not depend on query order.
double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

/// Standard normal built from two hashed uniforms (Box-Muller).
double hashed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

} // namespace v2x
