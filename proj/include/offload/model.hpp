#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "offload/mobility.hpp"

namespace offload {

/// Data volume counted in multiples of the discretization step sigma.
using Quanta = std::int32_t;
/// Decision slot, 1-based; the horizon is the last deadline.
using Epoch = std::int32_t;

/// Enumerator order is the argmin tie-break preference.
enum class Network : std::uint8_t { Idle = 0, Wlan = 1, Cellular = 2 };

const char* to_string(Network n);

struct FlowSpec {
    int id = 0;
    Quanta total_size = 0;  // sigma units
    Epoch deadline = 1;     // last slot in which the flow may transmit
};

/// Per-cell radio environment. Rates are per-slot capacities in sigma units;
/// throughputs are the nominal Mbps figures the energy rates were derived from.
struct LocationProfile {
    LocationId id = 0;
    bool wlan_available = false;
    Quanta cellular_rate = 0;
    Quanta wlan_rate = 0;
    double cellular_throughput = 0.0;  // Mbps
    double wlan_throughput = 0.0;      // Mbps, 0 without an AP
    double cellular_energy = 0.0;      // joule/Mbit
    double wlan_energy = 0.0;          // joule/Mbit

    Quanta capacity(Network n) const {
        switch (n) {
            case Network::Wlan: return wlan_available ? wlan_rate : 0;
            case Network::Cellular: return cellular_rate;
            default: return 0;
        }
    }
    double energy_rate(Network n) const {
        switch (n) {
            case Network::Wlan: return wlan_energy;
            case Network::Cellular: return cellular_energy;
            default: return 0.0;
        }
    }
};

struct State {
    LocationId location = 0;
    std::vector<Quanta> remaining;

    bool operator==(const State&) const = default;
};

struct Action {
    Network network = Network::Idle;
    std::vector<Quanta> allocation;  // one entry per flow, sigma units per slot

    static Action idle(std::size_t flows) { return {Network::Idle, std::vector<Quanta>(flows, 0)}; }
    Quanta total() const;

    bool operator==(const Action&) const = default;
};

struct CostParams {
    double price_per_mbit = 0.1875;      // yen/Mbit; 1.5 yen/Mbyte
    double energy_preference = 0.0;      // theta
    double penalty_coefficient = 2.0;    // yen-equivalent per unfinished Mbit
    std::vector<double> theta_schedule;  // optional per-slot override, index t-1

    double theta_at(Epoch t) const {
        if (!theta_schedule.empty() && t >= 1 &&
            static_cast<std::size_t>(t) <= theta_schedule.size()) {
            return theta_schedule[static_cast<std::size_t>(t) - 1];
        }
        return energy_preference;
    }
};

/// Immutable problem instance.
struct Scenario {
    int grid_width = 1;
    int grid_height = 1;
    std::vector<LocationProfile> locations;
    MobilityModel mobility;
    std::vector<FlowSpec> flows;  // sorted by non-decreasing deadline
    Epoch horizon = 0;            // last deadline
    CostParams costs;
    double sigma = 1.0;           // Mbit per quantum
    double slot_seconds = 1.0;
    std::uint64_t rng_seed = 0;

    std::size_t flow_count() const { return flows.size(); }
    int location_count() const { return static_cast<int>(locations.size()); }
    int ap_count() const;
    std::vector<Quanta> total_sizes() const;

    /// Throws ConfigError naming the first broken invariant.
    void validate() const;
};

/// Content hash over every field that influences results. Doubles are hashed
/// by bit pattern, so the value is identical on any IEEE-754 platform.
std::uint64_t scenario_fingerprint(const Scenario& scenario);
std::string fingerprint_hex(std::uint64_t fingerprint);

/// A flow may transmit in slot t iff t <= deadline and data remains.
inline bool flow_active(const FlowSpec& flow, Epoch t, Quanta remaining) {
    return t <= flow.deadline && remaining > 0;
}

/// Checks allocation shape, sign, the Idle rule and allocation <= remaining.
void check_basic_feasibility(const State& state, const Action& action);

/// Full check: basic rules plus network availability, capacity and the
/// rule that flows past their deadline cannot be served.
void check_feasible(const Scenario& scenario, Epoch t, const State& state, const Action& action);

/// p_c * sum_j min(b_j, a_c^j), in yen. Zero unless the action uses cellular.
double monetary_cost(const State& state, const Action& action, const CostParams& costs,
                     double sigma);

struct EnergyCost {
    double raw = 0.0;       // joule
    double weighted = 0.0;  // theta * raw
};

EnergyCost energy_cost(const State& state, const Action& action,
                       const LocationProfile& location, const CostParams& costs,
                       double sigma, Epoch t = 1);

/// g(b) = coefficient * sum(b) over the given slice, in Mbit.
double penalty(std::span<const Quanta> remaining, const CostParams& costs, double sigma);

struct StageCost {
    double monetary = 0.0;
    double raw_energy = 0.0;
    double weighted_energy = 0.0;

    double reward() const { return monetary + weighted_energy; }
};

StageCost stage_cost(const State& state, const Action& action, const LocationProfile& location,
                     const CostParams& costs, double sigma, Epoch t = 1);

/// r_t = monetary + theta-weighted energy.
inline double stage_reward(const State& state, const Action& action,
                           const LocationProfile& location, const CostParams& costs,
                           double sigma, Epoch t = 1) {
    return stage_cost(state, action, location, costs, sigma, t).reward();
}

/// [b - a]^+ componentwise.
std::vector<Quanta> apply_action(const State& state, const Action& action);

enum class ActionMode { Auto, Exhaustive, EdfRestricted };

/// Auto resolves to Exhaustive for one flow and EdfRestricted otherwise.
ActionMode resolve_action_mode(ActionMode mode, std::size_t flows);
const char* to_string(ActionMode mode);
ActionMode parse_action_mode(const std::string& text);

/// Earliest-deadline-first fill of `capacity` over the flows active at t.
/// Deadline ties go to the lower flow index.
std::vector<Quanta> edf_fill(std::span<const Quanta> remaining, std::span<const FlowSpec> flows,
                             Epoch t, Quanta capacity);

namespace detail {

template <typename Visit>
void compositions(std::span<const int> active, std::span<const Quanta> bound, Quanta budget,
                  std::size_t pos, std::vector<Quanta>& alloc, Quanta used, Visit& visit) {
    if (pos == active.size()) {
        if (used > 0) visit(std::span<const Quanta>(alloc));
        return;
    }
    const int j = active[pos];
    const Quanta hi = std::min<Quanta>(bound[static_cast<std::size_t>(j)], budget - used);
    for (Quanta v = 0; v <= hi; ++v) {
        alloc[static_cast<std::size_t>(j)] = v;
        compositions(active, bound, budget, pos + 1, alloc, used + v, visit);
    }
    alloc[static_cast<std::size_t>(j)] = 0;
}

}  // namespace detail

/// Calls visit(Network, span<const Quanta>) for each candidate action in the
/// canonical order: Idle, then WLAN, then cellular; inside a network the
/// allocation vectors ascend lexicographically. `mode` must be resolved.
template <typename Visit>
void for_each_action(const State& state, const LocationProfile& location, Epoch t,
                     std::span<const FlowSpec> flows, ActionMode mode, Visit&& visit) {
    const std::size_t m = flows.size();
    std::vector<Quanta> alloc(m, 0);
    visit(Network::Idle, std::span<const Quanta>(alloc));

    std::vector<int> active;
    active.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (flow_active(flows[j], t, state.remaining[j])) active.push_back(static_cast<int>(j));
    }
    if (active.empty()) return;

    for (Network net : {Network::Wlan, Network::Cellular}) {
        const Quanta cap = location.capacity(net);
        if (cap <= 0) continue;
        if (mode == ActionMode::EdfRestricted) {
            const auto fill = edf_fill(state.remaining, flows, t, cap);
            visit(net, std::span<const Quanta>(fill));
        } else {
            auto emit = [&](std::span<const Quanta> a) { visit(net, a); };
            detail::compositions(std::span<const int>(active), std::span<const Quanta>(state.remaining),
                                 cap, 0, alloc, 0, emit);
        }
    }
}

std::vector<Action> enumerate_actions(const State& state, const LocationProfile& location,
                                      Epoch t, std::span<const FlowSpec> flows, ActionMode mode);

}  // namespace offload
