#include "v2x/cli/app.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "v2x/engine/scenario.hpp"
#include "v2x/engine/simulator.hpp"
#include "v2x/environment/deployment.hpp"
#include "v2x/environment/geometry_dump.hpp"
#include "v2x/metrics/csv.hpp"
#include "v2x/metrics/sweep.hpp"

namespace v2x::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double parse_double(std::string_view s, const char* what)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad seed '" + std::string(s) + "'");
    return v;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed for " + p.string());
}

/// Written files and the reader that must accept each of them.
struct OutputSet
{
    enum class Kind
    {
        Records,
        Cdf,
        Prr,
        Json,
        Trace,
    };
    std::vector<std::pair<fs::path, Kind>> files;

    void add(const fs::path& p, Kind k) { files.emplace_back(p, k); }

    /// Re-reads every file. Returns the first problem, or an empty string.
    std::string verify() const
    {
        for (const auto& [path, kind] : files) {
            try {
                const auto text = read_file(path);
                switch (kind) {
                case Kind::Records: parse_records_csv(text); break;
                case Kind::Cdf: parse_cdf_csv(text); break;
                case Kind::Prr: parse_prr_csv(text); break;
                case Kind::Json:
                    if (!json::accept(text))
                        throw std::invalid_argument("not valid JSON");
                    break;
                case Kind::Trace:
                    if (text.rfind(std::string(kTraceHeader), 0) != 0)
                        throw std::invalid_argument("trace header mismatch");
                    break;
                }
            } catch (const std::exception& e) {
                return path.string() + ": " + e.what();
            }
        }
        return {};
    }
};

json effective_config(const Scenario& sc, const std::vector<std::uint64_t>& seeds, const std::optional<SweepSpec>& sweep)
{
    json j = to_json(sc);
    j["seeds"] = seeds;
    if (sweep)
        j["sweep"] = {{"key", sweep->key}, {"lo", sweep->lo}, {"hi", sweep->hi}, {"step", sweep->step}};
    return j;
}

void print_summary(std::ostream& out, const std::vector<PrrPoint>& prr, const std::vector<DeliveryRecord>& pooled,
                   const std::vector<Scheme>& schemes)
{
    for (Scheme s : schemes) {
        double sum = 0.0;
        int n = 0;
        for (const auto& p : prr) {
            if (p.scheme == s) {
                sum += p.prr;
                ++n;
            }
        }
        out << to_string(s) << ": prr " << (n ? format_number(sum / n, 4) : std::string("n/a"));
        if (auto m = median_latency(pooled, s))
            out << ", median latency " << format_number(*m, 1) << " ms";
        out << '\n';
    }
}

/// Plain run: one simulation per seed, all schemes on the same drop.
void run_seeds(const Scenario& sc, const std::vector<std::uint64_t>& seeds, int jobs, const fs::path& dir,
               OutputSet& outputs, std::ostream& out)
{
    const auto schemes = sc.active_schemes();
    std::vector<RunResult> results(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t k) {
        Scenario s = sc;
        s.seed = seeds[k];
        results[k] = run(s, schemes);
    });

    std::vector<DeliveryRecord> pooled;
    std::vector<PrrPoint> prr;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto& res = results[k];
        const auto records_path = dir / ("records_seed" + std::to_string(seeds[k]) + ".csv");
        write_file(records_path, records_csv(res.records));
        outputs.add(records_path, OutputSet::Kind::Records);
        if (sc.trace) {
            const auto trace_path = dir / ("trace_seed" + std::to_string(seeds[k]) + ".csv");
            write_file(trace_path, trace_csv(res.log.trace));
            outputs.add(trace_path, OutputSet::Kind::Trace);
        }
        if (!res.records.empty()) {
            for (auto p : compute_prr(res.records, sc.latency_bound)) {
                p.range_m = sc.range;
                p.seed = seeds[k];
                prr.push_back(p);
            }
        }
        pooled.insert(pooled.end(), res.records.begin(), res.records.end());
        if (res.log.pathloss_clamps > 0)
            out << "seed " << seeds[k] << ": " << res.log.pathloss_clamps
                << " link distances clamped to a pathloss model floor\n";
    }
    // Pool per scheme so each curve keeps its own denominator.
    std::vector<DeliveryRecord> by_scheme;
    for (Scheme s : schemes) {
        for (const auto& r : pooled) {
            if (r.scheme == s)
                by_scheme.push_back(r);
        }
    }
    write_file(dir / "cdf.csv", cdf_csv(latency_cdf(by_scheme)));
    outputs.add(dir / "cdf.csv", OutputSet::Kind::Cdf);
    write_file(dir / "prr.csv", prr_csv(prr));
    outputs.add(dir / "prr.csv", OutputSet::Kind::Prr);
    print_summary(out, prr, by_scheme, schemes);
}

std::string sweep_dir_name(const std::string& key, double v)
{
    std::string name = key + "=" + format_number(v);
    for (auto& c : name) {
        if (c == '/' || c == '\\')
            c = '_';
    }
    return name;
}

} // namespace

std::vector<double> SweepSpec::values() const
{
    std::vector<double> out;
    const double span = hi - lo;
    const auto steps = static_cast<long long>(std::floor(span / step + 1e-9));
    for (long long i = 0; i <= steps; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

SweepSpec parse_sweep(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw std::invalid_argument("sweep must look like KEY=lo:hi:step");
    SweepSpec s;
    s.key = std::string(text.substr(0, eq));
    const auto rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw std::invalid_argument("sweep must look like KEY=lo:hi:step");
    s.lo = parse_double(rest.substr(0, c1), "sweep bound");
    s.hi = parse_double(rest.substr(c1 + 1, c2 - c1 - 1), "sweep bound");
    s.step = parse_double(rest.substr(c2 + 1), "sweep step");
    if (!(s.step > 0.0))
        throw std::invalid_argument("sweep step must be positive");
    if (s.hi < s.lo)
        throw std::invalid_argument("sweep upper bound is below the lower bound");
    return s;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text)
{
    const auto dots = text.find("..");
    if (dots == std::string_view::npos)
        return {parse_u64(text)};
    const auto a = parse_u64(text.substr(0, dots));
    const auto b = parse_u64(text.substr(dots + 2));
    if (b < a)
        throw std::invalid_argument("seed range end is below its start");
    std::vector<std::uint64_t> out;
    for (auto s = a; s <= b; ++s)
        out.push_back(s);
    return out;
}

int run_cli(int argc, const char* const* argv, char** envp, std::ostream& out, std::ostream& err)
{
    RunManifest m;
    std::string seeds_text;
    std::string sweep_text;
    CLI::App app{"System-level V2X simulator: LTE-Uu unicast/eMBMS, PC5 sidelink and multi-RAT duplication"};
    app.add_option("--config", m.config_path, "scenario file (JSON, comments allowed)")->required();
    app.add_option("--set", m.overrides, "override KEY=VALUE, dotted keys for nested values (repeatable)");
    app.add_option("--seeds", seeds_text, "seed range A..B or a single seed (default: scenario seed)");
    app.add_option("--sweep", sweep_text, "sweep KEY=lo:hi:step; range sweeps write a PRR-vs-range file");
    app.add_option("--out", m.out_dir, "output directory")->capture_default_str();
    app.add_flag("--validate", m.validate, "check the scenario, print the effective configuration and exit");
    app.add_flag("--trace", m.trace, "write the per-TTI allocation trace");
    app.add_option("--jobs", m.jobs, "parallel simulations")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--dump-geometry", m.geometry_path, "write the layout as JSON to this path");
    app.footer("Environment: V2XSIM_<KEY>=VALUE mirrors --set, '__' separates nesting levels "
               "(V2XSIM_MAC__SR_PERIOD=10). --set wins over the environment.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    json doc;
    Scenario sc;
    try {
        m.seeds = seeds_text.empty() ? std::vector<std::uint64_t>{} : parse_seeds(seeds_text);
        if (!sweep_text.empty())
            m.sweep = parse_sweep(sweep_text);
        std::string text;
        try {
            text = read_file(m.config_path);
        } catch (const std::exception&) {
            throw ConfigError("cannot read config '" + m.config_path + "'");
        }
        doc = parse_config_text(text);
        apply_env_overrides(doc, envp);
        for (const auto& o : m.overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("override '" + o + "' must look like KEY=VALUE");
            apply_override(doc, o.substr(0, eq), o.substr(eq + 1));
        }
        if (m.trace)
            doc["trace"] = true;
        sc = resolve_scenario(doc);
        if (m.sweep) {
            // Resolve one sweep point early so that a bad key fails before any run.
            json probe = doc;
            apply_override(probe, m.sweep->key, format_number(m.sweep->lo));
            (void)resolve_scenario(probe);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (m.seeds.empty())
        m.seeds = {sc.seed};

    if (m.validate) {
        out << "OK\n";
        for (const auto& w : scenario_warnings(sc))
            out << "warning: " << w << '\n';
        out << effective_config(sc, m.seeds, m.sweep).dump(2) << '\n';
        return 0;
    }

    try {
        const fs::path dir(m.out_dir);
        fs::create_directories(dir);
        OutputSet outputs;
        for (const auto& w : scenario_warnings(sc))
            err << "warning: " << w << '\n';

        write_file(dir / "effective_config.json", effective_config(sc, m.seeds, m.sweep).dump(2) + "\n");
        outputs.add(dir / "effective_config.json", OutputSet::Kind::Json);

        if (!m.geometry_path.empty()) {
            const auto grid = build_grid(sc.grid.blocks_x, sc.grid.blocks_y, sc.grid);
            const auto site = make_site(grid, sc.radio.bs_height);
            const fs::path gp(m.geometry_path);
            if (gp.has_parent_path())
                fs::create_directories(gp.parent_path());
            write_file(gp, geometry_json(grid, site).dump(2) + "\n");
            outputs.add(gp, OutputSet::Kind::Json);
        }

        if (m.sweep && m.sweep->key == "range") {
            const auto schemes = sc.active_schemes();
            const auto res = sweep_ranges(sc, schemes, m.sweep->values(), m.seeds, m.jobs);
            write_file(dir / "prr.csv", prr_csv(res.points));
            outputs.add(dir / "prr.csv", OutputSet::Kind::Prr);
            for (Scheme s : schemes) {
                out << to_string(s) << ':';
                for (double r : m.sweep->values()) {
                    double sum = 0.0;
                    int n = 0;
                    for (const auto& p : res.points) {
                        if (p.scheme == s && p.range_m == r) {
                            sum += p.prr;
                            ++n;
                        }
                    }
                    out << ' ' << format_number(r) << "m=" << (n ? format_number(sum / n, 4) : std::string("n/a"));
                }
                out << '\n';
            }
        } else if (m.sweep) {
            for (double v : m.sweep->values()) {
                json point = doc;
                apply_override(point, m.sweep->key, format_number(v));
                const Scenario psc = resolve_scenario(point);
                const fs::path sub = dir / sweep_dir_name(m.sweep->key, v);
                fs::create_directories(sub);
                write_file(sub / "effective_config.json", effective_config(psc, m.seeds, std::nullopt).dump(2) + "\n");
                outputs.add(sub / "effective_config.json", OutputSet::Kind::Json);
                out << "[" << m.sweep->key << " = " << format_number(v) << "]\n";
                run_seeds(psc, m.seeds, m.jobs, sub, outputs, out);
            }
        } else {
            run_seeds(sc, m.seeds, m.jobs, dir, outputs, out);
        }

        if (const auto problem = outputs.verify(); !problem.empty()) {
            err << "error: output does not parse back: " << problem << '\n';
            return 1;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace v2x::cli
