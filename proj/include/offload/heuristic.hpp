#pragma once

#include <optional>
#include <span>
#include <vector>

#include "offload/dp.hpp"
#include "offload/model.hpp"
#include "offload/policy.hpp"

namespace offload {

/// Thresholds of the online heuristic.
struct HeuristicParams {
    /// gamma_th: WLAN is used only when the cell's nominal throughput (Mbps)
    /// is strictly above this value.
    double wlan_speed_threshold = 9.0;
    /// T_th in slots. Unset means adaptive: recomputed each slot from the
    /// smallest pending flow, see adaptive_deadline_threshold().
    std::optional<double> deadline_threshold;
    /// Mean cellular capacity over all cells, sigma units per slot. Only read
    /// by the adaptive T_th.
    double mean_cellular_rate = 1.0;
};

/// 9 + 3 * min(theta, 2) Mbps.
double default_wlan_speed_threshold(double theta);

/// Builds the default thresholds for a scenario; overrides replace them.
HeuristicParams default_heuristic_params(const Scenario& scenario,
                                         std::optional<double> deadline_threshold = {},
                                         std::optional<double> wlan_speed_threshold = {});

struct DeadlineWeights {
    std::vector<double> weights;         // normalized, zero for inactive flows
    std::vector<Epoch> deadline_remain;  // T^j - t for pending flows
};

/// Deadline weight 1/(T^j - t) for pending flows (t < T^j, data left), then
/// normalize(normalize(w) * normalize(b)). All-zero vectors stay all-zero.
DeadlineWeights deadline_weights(Epoch t, std::span<const FlowSpec> flows,
                                 std::span<const Quanta> remaining);

/// ceil(1.5 * min pending remaining / mean cellular rate), at least 1 slot.
double adaptive_deadline_threshold(Epoch t, std::span<const FlowSpec> flows,
                                   std::span<const Quanta> remaining, double mean_cellular_rate);

/// Splits `capacity` quanta in proportion to `weights` by largest remainder
/// (ties to the lower index), caps each share at the flow's remaining size
/// and hands the excess to the other weighted flows in descending weight
/// order. Flows with zero weight receive nothing.
std::vector<Quanta> proportional_split(Quanta capacity, std::span<const double> weights,
                                       std::span<const Quanta> remaining);

Action heuristic_decide(Epoch t, const State& state, const LocationProfile& location,
                        std::span<const FlowSpec> flows, const HeuristicParams& params);

/// Offload whenever possible: WLAN if the cell has an AP, cellular otherwise,
/// always at full capacity with an EDF split.
Action baseline_decide(Epoch t, const State& state, const LocationProfile& location,
                       std::span<const FlowSpec> flows);

Policy make_heuristic_policy(const Scenario& scenario, const HeuristicParams& params);
Policy make_baseline_policy(const Scenario& scenario);

/// Comparator that ignores energy: backward induction with theta forced to
/// zero. Only defined for single-flow scenarios; throws ConfigError otherwise.
Solution price_only_policy(const Scenario& scenario, const SolveOptions& options = {});

}  // namespace offload
