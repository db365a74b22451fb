#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "offload/dp.hpp"
#include "offload/model.hpp"
#include "offload/policy.hpp"
#include "offload/rng.hpp"

namespace offload {

struct SlotRecord {
    Epoch epoch = 0;
    LocationId location = 0;
    Action action;
    std::vector<Quanta> remaining_after;
    StageCost cost;
    double penalty = 0.0;  // charged for flows whose deadline closed this slot
};

struct EpisodeResult {
    double monetary_cost = 0.0;    // yen
    double raw_energy = 0.0;       // joule
    double weighted_energy = 0.0;  // theta-weighted, yen-equivalent
    double penalty_paid = 0.0;     // yen-equivalent
    std::vector<bool> finished;    // per flow: remaining hit 0 by its deadline
    std::vector<SlotRecord> trace;

    /// Realized objective: stage rewards plus penalties.
    double objective() const { return monetary_cost + weighted_energy + penalty_paid; }
    double finish_rate() const;
};

/// Simulates slots 1..horizon (stopping early once nothing remains): observe
/// location, query the policy, pay stage costs, shrink remaining sizes, charge
/// each flow's penalty when its deadline slot closes, then move.
/// Policy errors are rethrown with the slot and location prepended.
EpisodeResult run_episode(const Scenario& scenario, const Policy& policy,
                          LocationId start_location, Rng& rng, bool record_trace = true);

/// Raw energy of a recorded trace priced with `scenario`'s energy rates.
/// Replaying one trace under two energy curves isolates the curve effect.
double trace_energy(const Scenario& scenario, const std::vector<SlotRecord>& trace);

struct AggregateReport {
    std::string scenario_id;
    std::string policy;
    std::uint64_t fingerprint = 0;
    std::uint64_t seed = 0;
    std::size_t episodes = 0;
    double theta = 0.0;
    std::size_t n_flows = 0;
    int n_aps = 0;
    double mean_monetary = 0.0;
    double sd_monetary = 0.0;
    double mean_energy = 0.0;
    double sd_energy = 0.0;
    double mean_objective = 0.0;
    double sd_objective = 0.0;
    double finish_rate = 0.0;

    double se_monetary() const;
    double se_energy() const;
    double se_objective() const;
};

struct MonteCarloOptions {
    std::size_t episodes = 1000;
    std::uint64_t base_seed = 0;
    /// Fixed start cell; otherwise drawn uniformly from each episode's stream.
    std::optional<LocationId> start_location;
    unsigned threads = 1;
};

/// Episode i runs on Rng(derive_seed(base_seed, i)); results are reduced in
/// episode order with compensated sums, so the report does not depend on the
/// thread count.
AggregateReport monte_carlo(const Scenario& scenario, const Policy& policy,
                            const MonteCarloOptions& options);

/// Exact expected cost of following `policy` from every state: the backward
/// recursion of the solver with the action fixed by the policy.
ValueTable exact_policy_evaluation(const Scenario& scenario, const Policy& policy,
                                   std::size_t memory_budget = std::size_t{2} << 30);

/// V_1 at full flow sizes, starting in `start`.
double start_value(const Scenario& scenario, const ValueTable& values, LocationId start);

/// V_1 at full flow sizes averaged over a uniform start cell.
double uniform_start_value(const Scenario& scenario, const ValueTable& values);

}  // namespace offload
