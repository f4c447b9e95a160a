#include "v2x/engine/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;

namespace v2x {

namespace {

constexpr std::string_view kSchemeNames[] = {
    "uu-unicast", "uu-multicast", "pc5", "multirat-unicast", "multirat-multicast"};

std::string valid_scheme_list()
{
    std::string out;
    for (auto n : kSchemeNames) {
        if (!out.empty())
            out += ", ";
        out += n;
    }
    return out;
}

// Reads keys from one JSON object, remembering which were consumed so that
// leftovers can be reported as unknown.
class ObjectReader
{
public:
    ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix))
    {
        if (!obj_.is_object())
            throw ConfigError("'" + prefix_ + "' must be an object");
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("key '" + path(key) + "' has the wrong type");
        }
    }

    template <typename T>
    void require(const char* key, T& out)
    {
        if (!obj_.contains(key))
            throw ConfigError("missing required key '" + path(key) + "'");
        read(key, out);
    }

    const json* child(const char* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void allow(const char* key) { seen_.insert(key); }

    void reject_unknown() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw ConfigError("unknown key '" + path(it.key()) + "'");
        }
    }

    std::string path(const std::string& key) const
    {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& message)
{
    if (!ok)
        throw ConfigError(message);
}

void positive(double v, const char* key)
{
    check(v > 0.0, std::string(key) + " must be positive");
}

} // namespace

std::string_view to_string(Scheme s) noexcept
{
    return kSchemeNames[static_cast<int>(s)];
}

Scheme parse_scheme(std::string_view name)
{
    for (std::size_t i = 0; i < std::size(kSchemeNames); ++i) {
        if (kSchemeNames[i] == name)
            return static_cast<Scheme>(i);
    }
    throw ConfigError("unknown scheme '" + std::string(name) + "'; valid schemes: " + valid_scheme_list());
}

const std::vector<Scheme>& all_schemes()
{
    static const std::vector<Scheme> v = {Scheme::UuUnicast, Scheme::UuMulticast, Scheme::Pc5,
                                          Scheme::MultiratUnicast, Scheme::MultiratMulticast};
    return v;
}

bool uses_uu(Scheme s) noexcept
{
    return s != Scheme::Pc5;
}

bool uses_pc5(Scheme s) noexcept
{
    return s == Scheme::Pc5 || s == Scheme::MultiratUnicast || s == Scheme::MultiratMulticast;
}

bool uses_embms(Scheme s) noexcept
{
    return s == Scheme::UuMulticast || s == Scheme::MultiratMulticast;
}

std::int64_t Scenario::duration_ms() const
{
    return static_cast<std::int64_t>(std::llround(duration * 1000.0));
}

std::int64_t Scenario::warmup_ms() const
{
    return static_cast<std::int64_t>(std::llround(warmup * 1000.0));
}

std::vector<Scheme> Scenario::active_schemes() const
{
    return schemes.empty() ? std::vector<Scheme>{scheme} : schemes;
}

json parse_config_text(std::string_view config_text)
{
    try {
        return json::parse(config_text.begin(), config_text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column.
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, config_text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (config_text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    }
}

Scenario resolve_scenario(const json& doc)
{
    Scenario s;
    ObjectReader top(doc, "");

    std::string scheme;
    top.require("scheme", scheme);
    s.scheme = parse_scheme(scheme);
    top.require("density", s.density);
    top.require("range", s.range);
    top.read("duration", s.duration);
    top.read("warmup", s.warmup);
    top.read("seed", s.seed);
    top.read("latency_bound", s.latency_bound);
    top.read("sps", s.sps);
    top.read("inter_bs_delay", s.inter_bs_delay);
    top.read("trace", s.trace);
    // Consumed by the command-line front end.
    if (const json* list = top.child("schemes")) {
        check(list->is_array() && !list->empty(), "schemes must be a non-empty list");
        for (const auto& n : *list) {
            check(n.is_string(), "schemes entries must be strings");
            const Scheme parsed = parse_scheme(n.get<std::string>());
            check(std::find(s.schemes.begin(), s.schemes.end(), parsed) == s.schemes.end(),
                  "schemes entries must be distinct");
            s.schemes.push_back(parsed);
        }
    }
    top.allow("description");

    if (const json* g = top.child("geometry")) {
        ObjectReader r(*g, "geometry");
        r.read("blocks_x", s.grid.blocks_x);
        r.read("blocks_y", s.grid.blocks_y);
        r.read("cells_x", s.grid.cells_x);
        r.read("cells_y", s.grid.cells_y);
        r.read("park_cell_x", s.grid.park_cell_x);
        r.read("park_cell_y", s.grid.park_cell_y);
        r.read("building_size", s.grid.building_size);
        r.read("street_width", s.grid.street_width);
        r.read("building_height", s.grid.building_height);
        r.reject_unknown();
    }
    if (const json* c = top.child("carriers")) {
        ObjectReader r(*c, "carriers");
        r.read("uu_frequency", s.carriers.uu_frequency);
        r.read("uu_bandwidth", s.carriers.uu_bandwidth);
        r.read("pc5_frequency", s.carriers.pc5_frequency);
        r.read("pc5_bandwidth", s.carriers.pc5_bandwidth);
        r.read("rb_bandwidth", s.carriers.rb_bandwidth);
        r.read("rbs_per_tti", s.carriers.rbs_per_tti);
        r.reject_unknown();
    }
    if (const json* c = top.child("radio")) {
        ObjectReader r(*c, "radio");
        r.read("ue_power", s.radio.ue_power_dbm);
        r.read("bs_power", s.radio.bs_power_dbm);
        r.read("ue_height", s.radio.ue_height);
        r.read("bs_height", s.radio.bs_height);
        r.read("bs_antenna_gain", s.radio.bs_antenna_gain);
        r.read("bs_beamwidth", s.radio.bs_beamwidth_deg);
        r.read("bs_max_attenuation", s.radio.bs_max_attenuation);
        r.read("ue_noise_figure", s.radio.ue_noise_figure);
        r.read("bs_noise_figure", s.radio.bs_noise_figure);
        r.read("half_duplex", s.radio.half_duplex);
        r.reject_unknown();
    }
    if (const json* c = top.child("channel")) {
        ObjectReader r(*c, "channel");
        r.read("v2v_model", s.channel.v2v_model);
        r.read("uu_model", s.channel.uu_model);
        r.read("shadowing", s.channel.shadowing);
        r.read("v2v_sigma_los", s.channel.v2v_sigma_los);
        r.read("v2v_sigma_nlos", s.channel.v2v_sigma_nlos);
        r.read("uu_sigma_los", s.channel.uu_sigma_los);
        r.read("uu_sigma_nlos", s.channel.uu_sigma_nlos);
        r.reject_unknown();
    }
    if (const json* c = top.child("phy")) {
        ObjectReader r(*c, "phy");
        std::string bler = "step";
        r.read("bler_model", bler);
        if (bler == "step")
            s.phy.bler_model = BlerModel::Step;
        else if (bler == "curve")
            s.phy.bler_model = BlerModel::Curve;
        else
            throw ConfigError("phy.bler_model must be 'step' or 'curve'");
        r.read("bler_slope", s.phy.bler_slope);
        r.read("max_harq_attempts", s.phy.max_harq_attempts);
        r.read("harq_rtt", s.phy.harq_rtt);
        r.read("pc5_cqi", s.phy.pc5_cqi);
        r.read("embms_cqi", s.phy.embms_cqi);
        r.read("pc5_repetitions", s.phy.pc5_repetitions);
        r.read("embms_repetitions", s.phy.embms_repetitions);
        r.read("ul_csi_margin", s.phy.ul_csi_margin);
        r.read("mcs_table", s.phy.mcs_table);
        r.read("forced_nacks", s.phy.forced_nacks);
        r.reject_unknown();
    }
    if (const json* c = top.child("mac")) {
        ObjectReader r(*c, "mac");
        r.read("sr_period", s.mac.sr_period);
        r.read("bs_processing", s.mac.bs_processing);
        r.read("grant_to_data", s.mac.grant_to_data);
        r.read("dl_processing", s.mac.dl_processing);
        r.read("sidelink_mode", s.mac.sidelink_mode);
        r.read("mode4_window", s.mac.mode4_window);
        r.read("pool_first_rb", s.mac.pool_first_rb);
        r.read("pool_rbs", s.mac.pool_rbs);
        r.reject_unknown();
    }
    if (const json* c = top.child("traffic")) {
        ObjectReader r(*c, "traffic");
        r.read("period", s.traffic.period);
        r.read("payload", s.traffic.payload);
        r.reject_unknown();
    }
    if (const json* c = top.child("mobility")) {
        ObjectReader r(*c, "mobility");
        r.read("max_speed", s.mobility.max_speed_kmh);
        r.read("step", s.mobility.step);
        r.reject_unknown();
    }
    top.reject_unknown();

    positive(s.density, "density");
    positive(s.range, "range");
    check(s.warmup >= 0.0, "warmup must be non-negative");
    check(s.duration > s.warmup, "duration must exceed warmup");
    check(s.latency_bound > 0, "latency_bound must be positive");
    check(s.inter_bs_delay >= 0, "inter_bs_delay must be non-negative");

    check(s.grid.blocks_x >= 1 && s.grid.blocks_y >= 1, "geometry.blocks_x and blocks_y must be >= 1");
    check(s.grid.cells_x >= 1 && s.grid.cells_y >= 1, "geometry.cells_x and cells_y must be >= 1");
    positive(s.grid.building_size, "geometry.building_size");
    positive(s.grid.street_width, "geometry.street_width");

    positive(s.carriers.uu_frequency, "carriers.uu_frequency");
    positive(s.carriers.pc5_frequency, "carriers.pc5_frequency");
    positive(s.carriers.uu_bandwidth, "carriers.uu_bandwidth");
    positive(s.carriers.pc5_bandwidth, "carriers.pc5_bandwidth");
    positive(s.carriers.rb_bandwidth, "carriers.rb_bandwidth");
    check(s.carriers.rbs_per_tti >= 1, "carriers.rbs_per_tti must be >= 1");

    check(s.radio.ue_height > 0.0 && s.radio.bs_height > 0.0, "radio heights must be positive");
    check(s.radio.bs_height >= s.grid.building_height, "radio.bs_height must be at or above the rooftop");
    positive(s.radio.bs_beamwidth_deg, "radio.bs_beamwidth");

    check(s.channel.v2v_model == "winner-b1-manhattan",
          "channel.v2v_model must be 'winner-b1-manhattan'");
    check(s.channel.uu_model == "3gpp-uma", "channel.uu_model must be '3gpp-uma'");
    check(s.channel.v2v_sigma_los >= 0 && s.channel.v2v_sigma_nlos >= 0 && s.channel.uu_sigma_los >= 0 &&
              s.channel.uu_sigma_nlos >= 0,
          "shadowing sigmas must be non-negative");

    check(s.phy.max_harq_attempts >= 1, "phy.max_harq_attempts must be >= 1");
    check(s.phy.harq_rtt >= 1, "phy.harq_rtt must be >= 1");
    check(s.phy.pc5_repetitions >= 1, "phy.pc5_repetitions must be >= 1");
    check(s.phy.embms_repetitions >= 1, "phy.embms_repetitions must be >= 1");
    check(s.phy.forced_nacks >= 0, "phy.forced_nacks must be non-negative");
    positive(s.phy.bler_slope, "phy.bler_slope");

    check(s.mac.sr_period >= 1, "mac.sr_period must be >= 1");
    check(s.mac.bs_processing >= 0 && s.mac.grant_to_data >= 0 && s.mac.dl_processing >= 0,
          "mac delays must be non-negative");
    check(s.mac.sidelink_mode == 3 || s.mac.sidelink_mode == 4, "mac.sidelink_mode must be 3 or 4");
    check(s.mac.mode4_window >= 1, "mac.mode4_window must be >= 1");
    check(s.mac.pool_first_rb >= 0 && s.mac.pool_rbs >= 0 &&
              s.mac.pool_first_rb + s.mac.pool_rbs <= s.carriers.rbs_per_tti,
          "mac.pool must lie inside the PC5 carrier");

    check(s.traffic.period >= 1, "traffic.period must be >= 1");
    check(s.traffic.payload >= 1, "traffic.payload must be >= 1");
    check(s.mobility.max_speed_kmh > 0.0 && s.mobility.max_speed_kmh <= 50.0,
          "mobility.max_speed must be in (0, 50] km/h");
    check(s.mobility.step >= 1, "mobility.step must be >= 1");
    return s;
}

Scenario load_scenario(std::string_view config_text)
{
    return resolve_scenario(parse_config_text(config_text));
}

Scenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

void apply_override(json& doc, std::string_view dotted_key, std::string_view value)
{
    if (dotted_key.empty())
        throw ConfigError("override key is empty");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted_key.find('.', start);
        const std::string part(dotted_key.substr(start, dot == std::string_view::npos ? std::string_view::npos
                                                                                       : dot - start));
        if (part.empty())
            throw ConfigError("malformed override key '" + std::string(dotted_key) + "'");
        if (!node->is_object())
            throw ConfigError("override '" + std::string(dotted_key) + "' descends into a non-object");
        if (dot == std::string_view::npos) {
            json parsed = json::parse(value.begin(), value.end(), nullptr, false);
            (*node)[part] = parsed.is_discarded() ? json(std::string(value)) : parsed;
            return;
        }
        node = &(*node)[part];
        if (node->is_null())
            *node = json::object();
        start = dot + 1;
    }
}

void apply_env_overrides(json& doc, char** envp)
{
    if (envp == nullptr)
        return;
    constexpr std::string_view prefix = "V2XSIM_";
    for (char** e = envp; *e != nullptr; ++e) {
        std::string_view entry(*e);
        if (entry.substr(0, prefix.size()) != prefix)
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos)
            continue;
        std::string key(entry.substr(prefix.size(), eq - prefix.size()));
        std::string dotted;
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (key[i] == '_' && i + 1 < key.size() && key[i + 1] == '_') {
                dotted += '.';
                ++i;
            } else {
                dotted += static_cast<char>(std::tolower(static_cast<unsigned char>(key[i])));
            }
        }
        apply_override(doc, dotted, entry.substr(eq + 1));
    }
}

json to_json(const Scenario& s)
{
    json j;
    j["scheme"] = std::string(to_string(s.scheme));
    j["density"] = s.density;
    j["range"] = s.range;
    j["duration"] = s.duration;
    j["warmup"] = s.warmup;
    j["seed"] = s.seed;
    j["latency_bound"] = s.latency_bound;
    j["sps"] = s.sps;
    j["inter_bs_delay"] = s.inter_bs_delay;
    j["trace"] = s.trace;
    if (!s.schemes.empty()) {
        json list = json::array();
        for (Scheme x : s.schemes)
            list.push_back(std::string(to_string(x)));
        j["schemes"] = list;
    }
    j["geometry"] = {{"blocks_x", s.grid.blocks_x},           {"blocks_y", s.grid.blocks_y},
                     {"cells_x", s.grid.cells_x},             {"cells_y", s.grid.cells_y},
                     {"park_cell_x", s.grid.park_cell_x},     {"park_cell_y", s.grid.park_cell_y},
                     {"building_size", s.grid.building_size}, {"street_width", s.grid.street_width},
                     {"building_height", s.grid.building_height}};
    j["carriers"] = {{"uu_frequency", s.carriers.uu_frequency},   {"uu_bandwidth", s.carriers.uu_bandwidth},
                     {"pc5_frequency", s.carriers.pc5_frequency}, {"pc5_bandwidth", s.carriers.pc5_bandwidth},
                     {"rb_bandwidth", s.carriers.rb_bandwidth},   {"rbs_per_tti", s.carriers.rbs_per_tti}};
    j["radio"] = {{"ue_power", s.radio.ue_power_dbm},
                  {"bs_power", s.radio.bs_power_dbm},
                  {"ue_height", s.radio.ue_height},
                  {"bs_height", s.radio.bs_height},
                  {"bs_antenna_gain", s.radio.bs_antenna_gain},
                  {"bs_beamwidth", s.radio.bs_beamwidth_deg},
                  {"bs_max_attenuation", s.radio.bs_max_attenuation},
                  {"ue_noise_figure", s.radio.ue_noise_figure},
                  {"bs_noise_figure", s.radio.bs_noise_figure},
                  {"half_duplex", s.radio.half_duplex}};
    j["channel"] = {{"v2v_model", s.channel.v2v_model},
                    {"uu_model", s.channel.uu_model},
                    {"shadowing", s.channel.shadowing},
                    {"v2v_sigma_los", s.channel.v2v_sigma_los},
                    {"v2v_sigma_nlos", s.channel.v2v_sigma_nlos},
                    {"uu_sigma_los", s.channel.uu_sigma_los},
                    {"uu_sigma_nlos", s.channel.uu_sigma_nlos}};
    j["phy"] = {{"bler_model", s.phy.bler_model == BlerModel::Step ? "step" : "curve"},
                {"bler_slope", s.phy.bler_slope},
                {"max_harq_attempts", s.phy.max_harq_attempts},
                {"harq_rtt", s.phy.harq_rtt},
                {"pc5_cqi", s.phy.pc5_cqi},
                {"embms_cqi", s.phy.embms_cqi},
                {"pc5_repetitions", s.phy.pc5_repetitions},
                {"embms_repetitions", s.phy.embms_repetitions},
                {"ul_csi_margin", s.phy.ul_csi_margin},
                {"mcs_table", s.phy.mcs_table},
                {"forced_nacks", s.phy.forced_nacks}};
    j["mac"] = {{"sr_period", s.mac.sr_period},         {"bs_processing", s.mac.bs_processing},
                {"grant_to_data", s.mac.grant_to_data}, {"dl_processing", s.mac.dl_processing},
                {"sidelink_mode", s.mac.sidelink_mode}, {"mode4_window", s.mac.mode4_window},
                {"pool_first_rb", s.mac.pool_first_rb}, {"pool_rbs", s.mac.pool_rbs}};
    j["traffic"] = {{"period", s.traffic.period}, {"payload", s.traffic.payload}};
    j["mobility"] = {{"max_speed", s.mobility.max_speed_kmh}, {"step", s.mobility.step}};
    return j;
}

std::vector<std::string> scenario_warnings(const Scenario& s)
{
    std::vector<std::string> out;
    const double pitch = s.grid.building_size + s.grid.street_width;
    const double w = pitch * s.grid.cells_x * s.grid.blocks_x;
    const double h = pitch * s.grid.cells_y * s.grid.blocks_y;
    if (s.range > 0.5 * std::min(w, h))
        out.push_back("range exceeds half the wrap-around area side; relevant sets saturate");
    if (s.warmup == 0.0)
        out.push_back("warmup is 0 s; SPS configuration transients are included in metrics");
    if (s.phy.forced_nacks > 0)
        out.push_back("phy.forced_nacks is a test hook; reliability figures are not meaningful");
    if (s.latency_bound > s.traffic.period)
        out.push_back("latency_bound exceeds the traffic period");
    return out;
}

} // namespace v2x
