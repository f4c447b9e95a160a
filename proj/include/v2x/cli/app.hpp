#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace v2x::cli {

/// `--sweep KEY=lo:hi:step`; values run from lo to hi inclusive.
struct SweepSpec
{
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    std::vector<double> values() const;
};

struct RunManifest
{
    std::string config_path;
    std::vector<std::string> overrides; // KEY=VALUE
    std::string out_dir = "results";
    std::vector<std::uint64_t> seeds;   // empty: the scenario seed
    std::optional<SweepSpec> sweep;
    bool validate = false;
    bool trace = false;
    int jobs = 1;
    std::string geometry_path;
};

/// Throws std::invalid_argument on malformed specs.
SweepSpec parse_sweep(std::string_view text);
/// "A..B" (inclusive) or a single seed.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Environment variables read as overrides: V2XSIM_<KEY>, with "__" between
/// nesting levels (V2XSIM_MAC__SR_PERIOD=10 sets mac.sr_period).
inline constexpr std::string_view kEnvPrefix = "V2XSIM_";

/// Whole front end. Returns the process exit code: 0 when every requested
/// output was written and parses back, 1 on run or output failures, 2 on
/// usage or configuration errors.
int run_cli(int argc, const char* const* argv, char** envp, std::ostream& out, std::ostream& err);

} // namespace v2x::cli
