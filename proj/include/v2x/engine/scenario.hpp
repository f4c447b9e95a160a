#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace v2x {

enum class Scheme
{
    UuUnicast,
    UuMulticast,
    Pc5,
    MultiratUnicast,
    MultiratMulticast,
};

std::string_view to_string(Scheme s) noexcept;
/// Throws ConfigError listing the valid names when `name` is unknown.
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

bool uses_uu(Scheme s) noexcept;
bool uses_pc5(Scheme s) noexcept;
/// True for schemes whose Uu downlink is eMBMS.
bool uses_embms(Scheme s) noexcept;

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class BlerModel
{
    Step,
    Curve,
};

struct GridParams
{
    int blocks_x = 1;
    int blocks_y = 1;
    int cells_x = 4;             // lattice cells per block, one of them is the park
    int cells_y = 4;
    int park_cell_x = 1;
    int park_cell_y = 2;
    double building_size = 120.0; // m, square footprint
    double street_width = 21.0;   // m
    double building_height = 22.0;
};

struct CarrierParams
{
    double uu_frequency = 2.0e9;
    double uu_bandwidth = 10.0e6; // per direction
    double pc5_frequency = 5.9e9;
    double pc5_bandwidth = 10.0e6;
    double rb_bandwidth = 180.0e3;
    int rbs_per_tti = 50;
};

struct RadioParams
{
    double ue_power_dbm = 24.0;    // per 10 MHz
    double bs_power_dbm = 46.0;    // over the downlink carrier
    double ue_height = 1.5;
    double bs_height = 25.0;
    double bs_antenna_gain = 15.0; // boresight, dBi
    double bs_beamwidth_deg = 70.0;
    double bs_max_attenuation = 25.0;
    double ue_noise_figure = 9.0;
    double bs_noise_figure = 5.0;
    bool half_duplex = true;
};

struct ChannelParams
{
    std::string v2v_model = "winner-b1-manhattan";
    std::string uu_model = "3gpp-uma";
    bool shadowing = true;
    double v2v_sigma_los = 3.0;
    double v2v_sigma_nlos = 4.0;
    double uu_sigma_los = 4.0;
    double uu_sigma_nlos = 6.0;
};

struct PhyParams
{
    BlerModel bler_model = BlerModel::Step;
    double bler_slope = 1.5;          // 1/dB, curve model only
    int max_harq_attempts = 4;
    int harq_rtt = 7;                 // ms between attempt end and retransmission start
    int pc5_cqi = 4;
    int embms_cqi = 5;
    int pc5_repetitions = 2;          // total transmissions per packet
    int embms_repetitions = 2;
    double ul_csi_margin = 3.0;       // dB backed off the noise-limited uplink SINR
    std::string mcs_table;            // empty: built-in table
    int forced_nacks = 0;             // test hook: first N HARQ attempts always NACKed
};

struct MacParams
{
    int sr_period = 5;
    int bs_processing = 3;
    int grant_to_data = 3;
    int dl_processing = 2;
    int sidelink_mode = 3;
    int mode4_window = 100;
    int pool_first_rb = 0;
    int pool_rbs = 50;
};

struct TrafficParams
{
    int period = 100; // ms
    int payload = 212; // bytes
};

struct MobilityParams
{
    double max_speed_kmh = 50.0;
    int step = 100; // ms
};

struct Scenario
{
    Scheme scheme = Scheme::Pc5;
    double density = 0.0;      // vehicles per km^2
    double range = 0.0;        // m
    double duration = 5.0;     // s
    double warmup = 1.0;       // s
    std::uint64_t seed = 1;
    int latency_bound = 100;   // ms
    bool sps = true;
    int inter_bs_delay = 1;    // ms
    bool trace = false;
    std::vector<Scheme> schemes; // evaluated together on one drop; empty means {scheme}

    GridParams grid;
    CarrierParams carriers;
    RadioParams radio;
    ChannelParams channel;
    PhyParams phy;
    MacParams mac;
    TrafficParams traffic;
    MobilityParams mobility;

    std::int64_t duration_ms() const;
    std::int64_t warmup_ms() const;
    std::vector<Scheme> active_schemes() const;
};

/// Parses a JSON scenario document. Errors carry line/column or the key name.
Scenario load_scenario(std::string_view config_text);
Scenario load_scenario_file(const std::string& path);

/// Resolves an already parsed document (after overrides) into a Scenario.
Scenario resolve_scenario(const nlohmann::json& doc);

nlohmann::json parse_config_text(std::string_view config_text);

/// Sets `dotted.key` to `value` in `doc`. The value is parsed as JSON when it
/// is valid JSON, otherwise taken as a string.
void apply_override(nlohmann::json& doc, std::string_view dotted_key, std::string_view value);

/// Applies `V2XSIM_<KEY>` environment variables; `__` separates nesting levels.
void apply_env_overrides(nlohmann::json& doc, char** envp);

/// Fully resolved configuration, including defaults.
nlohmann::json to_json(const Scenario& s);

/// Non-fatal findings about a valid scenario.
std::vector<std::string> scenario_warnings(const Scenario& s);

} // namespace v2x
