#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "offload/config.hpp"
#include "offload/sim.hpp"

namespace offload {

/// Entry point of the `offload` tool. Returns 0 on success, 2 on a usage
/// error and 1 on any other failure (diagnostic on `err`).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

struct RunSettings {
    std::vector<std::string> policies;  // empty: dp, heuristic, baseline (+ price_only for M = 1)
    unsigned threads = 1;
};

/// Runs every requested policy on the scenario built from `config` with
/// common random numbers (same episode seeds for every policy).
std::vector<AggregateReport> evaluate_policies(const ScenarioConfig& config,
                                               const RunSettings& settings);

enum class SweepAxis { Theta, Flows, Aps, Deadline };

SweepAxis parse_sweep_axis(const std::string& text);

/// Applies one sweep level to a config:
///   theta    -> costs.theta
///   flows    -> keep the first `value` flows of the config
///   aps      -> ap_count
///   deadline -> rescale every deadline so the last one equals `value`
ScenarioConfig apply_sweep_level(ScenarioConfig config, SweepAxis axis, double value);

std::vector<AggregateReport> run_sweep(const ScenarioConfig& config, SweepAxis axis,
                                       const std::vector<double>& values,
                                       const RunSettings& settings);

}  // namespace offload
