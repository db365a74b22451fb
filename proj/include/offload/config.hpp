#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "offload/energy_curve.hpp"
#include "offload/mobility.hpp"
#include "offload/model.hpp"
#include "offload/rng.hpp"

namespace offload {

inline constexpr int kSchemaVersion = 1;

struct ThroughputDist {
    double mean = 0.0;    // Mbps
    double stddev = 1.0;
    double lo = 0.0;
    double hi = 1.0;

    bool operator==(const ThroughputDist&) const = default;
};

struct FlowConfig {
    double size_mbit = 0.0;  // multiple of sigma
    Epoch deadline = 1;

    bool operator==(const FlowConfig&) const = default;
};

/// Human-editable scenario description. The JSON schema mirrors the field
/// names below; see README for an annotated example.
struct ScenarioConfig {
    int schema_version = kSchemaVersion;
    std::string name = "scenario";

    int grid_width = 4;
    int grid_height = 4;
    double stay_prob = 0.6;
    Adjacency adjacency = Adjacency::VonNeumann;
    int ap_count = 8;
    ThroughputDist wlan{15.0, 6.0, 9.0, 21.0};
    ThroughputDist cellular{10.0, 5.0, 5.0, 15.0};
    EnergyCurve energy_curve = kCurveF1;

    double sigma = 25.0;  // Mbit
    double slot_seconds = 1.0;
    std::vector<FlowConfig> flows;

    double price_per_mbit = 0.1875;
    double theta = 1.0;
    double penalty_coefficient = 2.0;
    std::vector<double> theta_schedule;

    std::optional<double> deadline_threshold;    // T_th override, slots
    std::optional<double> wlan_speed_threshold;  // gamma_th override, Mbps

    std::size_t episodes = 1000;
    std::uint64_t seed = 0;
    std::optional<LocationId> start_location;
    ActionMode action_mode = ActionMode::Auto;

    std::string policy_path;  // default output of `solve`
    std::string report_path;  // default output of `simulate` / `sweep`

    /// Throws ConfigError naming the first problem.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& json_text);
std::string emit_config(const ScenarioConfig& config);
/// Throws IoError when the file cannot be read; the message names the path.
ScenarioConfig load_config(const std::string& path);

/// Random scenario: one uniform permutation of the cells, the first ap_count
/// of which get an AP; then per cell (row-major) a cellular throughput and a
/// WLAN throughput from the truncated normals. Both throughputs are drawn for
/// every cell so that scenarios with the same seed and different ap_count
/// share throughputs and nest their AP sets. Capacities are
/// max(1, round(throughput * slot_seconds / sigma)) quanta; energy rates are
/// the curve at the sampled throughput.
Scenario generate_scenario(const ScenarioConfig& config, Rng& rng);

/// The generator stream for a config seed. Disjoint from the episode streams.
Rng scenario_rng(std::uint64_t seed);

/// generate_scenario(config, scenario_rng(config.seed)).
Scenario build_scenario(const ScenarioConfig& config);

/// 4x4 grid, 8 APs, sigma 25 Mbit, theta 2, flows (500 Mbit, 140 slots) and
/// (550, 280).
ScenarioConfig desk_preset();
/// desk_preset with only the first flow.
ScenarioConfig single_flow_desk_preset();
/// Single 200 Mbit flow due in 20 slots, sigma 5 Mbit, theta 1. Tight enough
/// that the finish rate depends on the AP count.
ScenarioConfig ap_sweep_preset();

/// Tiny random instance for oracle checks: L in {1, 2, 4}, T <= 4, M in {1, 2},
/// sizes <= 4 sigma, random mobility rows and capacities of 1..3 quanta.
Scenario random_tiny_scenario(Rng& rng);

}  // namespace offload
