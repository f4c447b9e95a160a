#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2x/cli/app.hpp"
#include "v2x/metrics/csv.hpp"

using namespace v2x;
namespace fs = std::filesystem;

namespace {

struct Result
{
    int code = -1;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, std::vector<std::string> env = {})
{
    args.insert(args.begin(), "v2xsim");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::vector<char*> envp;
    for (auto& e : env)
        envp.push_back(e.data());
    envp.push_back(nullptr);
    std::ostringstream out, err;
    Result r;
    r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), envp.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("v2xsim-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body)
{
    const auto p = dir / "scenario.cfg";
    std::ofstream(p) << body;
    return p;
}

const char* kSmall = R"({
  // short desk run
  "scheme": "pc5",
  "schemes": ["pc5", "uu-multicast", "multirat-multicast"],
  "density": 150, "range": 150, "duration": 2, "warmup": 1,
  "geometry": {"building_size": 104}
})";

} // namespace

TEST_CASE("seed and sweep arguments")
{
    CHECK(cli::parse_seeds("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
    CHECK(cli::parse_seeds("7") == std::vector<std::uint64_t>{7});
    CHECK_THROWS(cli::parse_seeds("4..1"));
    CHECK_THROWS(cli::parse_seeds("a..b"));
    const auto s = cli::parse_sweep("range=100:300:50");
    CHECK(s.key == "range");
    CHECK(s.values() == std::vector<double>{100, 150, 200, 250, 300});
    CHECK(cli::parse_sweep("density=0.5:1.5:0.5").values().size() == 3);
    CHECK_THROWS(cli::parse_sweep("range=100:300"));
    CHECK_THROWS(cli::parse_sweep("range=100:300:0"));
    CHECK_THROWS(cli::parse_sweep("=1:2:1"));
}

TEST_CASE("validate prints the effective configuration")
{
    const auto dir = scratch("validate");
    const auto cfg = write_config(dir, kSmall);
    const auto r = invoke({"--config", cfg.string(), "--validate", "--set", "scheme=multirat-multicast"},
                       {"V2XSIM_MAC__SR_PERIOD=10"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("OK\n", 0) == 0);
    const auto j = nlohmann::json::parse(r.out.substr(3));
    CHECK(j["scheme"] == "multirat-multicast");
    CHECK(j["mac"]["sr_period"] == 10);
    CHECK(j["seeds"] == nlohmann::json::array({1}));
}

TEST_CASE("--set wins over the environment")
{
    const auto dir = scratch("precedence");
    const auto cfg = write_config(dir, kSmall);
    const auto r = invoke({"--config", cfg.string(), "--validate", "--set", "range=120"}, {"V2XSIM_RANGE=90"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out.substr(3))["range"] == 120.0);
}

TEST_CASE("configuration errors exit with status 2 and name the key")
{
    const auto dir = scratch("errors");
    const auto cfg = write_config(dir, R"({"scheme": "pc5", "range": 100})");
    auto r = invoke({"--config", cfg.string(), "--validate"});
    CHECK(r.code == 2);
    CHECK(r.err.find("density") != std::string::npos);
    r = invoke({"--config", (dir / "missing.cfg").string()});
    CHECK(r.code == 2);
    r = invoke({"--config", write_config(dir, kSmall).string(), "--sweep", "nonsense=1:2:1"});
    CHECK(r.code == 2);
    r = invoke({"--bogus"});
    CHECK(r.code == 2);
}

TEST_CASE("a run writes records, cdf and prr files that parse back")
{
    const auto dir = scratch("run");
    const auto cfg = write_config(dir, kSmall);
    const auto out = dir / "out";
    const auto r = invoke({"--config", cfg.string(), "--seeds", "1..2", "--out", out.string(), "--trace", "--dump-geometry",
                        (out / "geometry.json").string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"records_seed1.csv", "records_seed2.csv", "cdf.csv", "prr.csv", "trace_seed1.csv",
                          "effective_config.json", "geometry.json"})
        CHECK(fs::exists(out / f));
    const auto prr = parse_prr_csv(slurp(out / "prr.csv"));
    CHECK(prr.size() == 2 * 3);
    const auto cdf = parse_cdf_csv(slurp(out / "cdf.csv"));
    CHECK(!cdf.empty());
    const auto recs = parse_records_csv(slurp(out / "records_seed1.csv"));
    CHECK(!recs.empty());
    CHECK(slurp(out / "trace_seed1.csv").rfind(std::string(kTraceHeader), 0) == 0);
    CHECK(r.out.find("multirat-multicast: prr") != std::string::npos);
}

TEST_CASE("range sweeps write one prr file")
{
    const auto dir = scratch("sweep");
    const auto cfg = write_config(dir, kSmall);
    const auto out = dir / "out";
    const auto r = invoke({"--config", cfg.string(), "--sweep", "range=100:150:50", "--out", out.string(), "--jobs", "2"});
    REQUIRE(r.code == 0);
    const auto prr = parse_prr_csv(slurp(out / "prr.csv"));
    CHECK(prr.size() == 2 * 3);
}

TEST_CASE("other sweeps write one directory per value")
{
    const auto dir = scratch("keysweep");
    const auto cfg = write_config(dir, kSmall);
    const auto out = dir / "out";
    const auto r = invoke({"--config", cfg.string(), "--sweep", "density=100:200:100", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "density=100" / "prr.csv"));
    CHECK(fs::exists(out / "density=200" / "cdf.csv"));
}

TEST_CASE("identical runs produce byte-identical files")
{
    const auto dir = scratch("determinism");
    const auto cfg = write_config(dir, kSmall);
    REQUIRE(invoke({"--config", cfg.string(), "--out", (dir / "a").string(), "--trace"}).code == 0);
    REQUIRE(invoke({"--config", cfg.string(), "--out", (dir / "b").string(), "--trace"}).code == 0);
    for (const char* f : {"records_seed1.csv", "cdf.csv", "prr.csv", "trace_seed1.csv"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("shipped presets validate")
{
    for (const char* name : {"fig5.cfg", "fig6.cfg", "fig7.cfg", "desk.cfg"}) {
        const auto r = invoke({"--config", std::string(V2X_SOURCE_DIR) + "/configs/" + name, "--validate"});
        CHECK_MESSAGE(r.code == 0, name);
    }
}
