#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "offload/model.hpp"
#include "offload/policy.hpp"

namespace offload {

/// Dense enumeration of (location, remaining-vector) pairs. Index layout is
/// location-major, then flow 0, ..., flow M-1 with the last flow fastest.
class StateSpace {
public:
    StateSpace() = default;
    StateSpace(int locations, std::vector<Quanta> max_sizes);

    int locations() const { return locations_; }
    std::size_t flows() const { return max_sizes_.size(); }
    const std::vector<Quanta>& max_sizes() const { return max_sizes_; }
    std::size_t per_location() const { return per_location_; }
    std::size_t size() const { return per_location_ * static_cast<std::size_t>(locations_); }

    bool contains(const State& s) const;
    /// Precondition: contains(s).
    std::size_t index(const State& s) const;
    std::size_t index(LocationId l, std::span<const Quanta> remaining) const;
    State state(std::size_t index) const;
    void decode(std::size_t index, LocationId& l, std::span<Quanta> remaining) const;

    bool operator==(const StateSpace&) const = default;

private:
    int locations_ = 0;
    std::vector<Quanta> max_sizes_;
    std::vector<std::size_t> strides_;
    std::size_t per_location_ = 1;
};

/// Cost-to-go V_t(s) for t = 1 .. horizon+1.
class ValueTable {
public:
    ValueTable(StateSpace space, Epoch horizon);

    const StateSpace& space() const { return space_; }
    Epoch horizon() const { return horizon_; }
    double value(Epoch t, const State& s) const;
    std::span<const double> layer(Epoch t) const;
    std::span<double> layer(Epoch t);

private:
    StateSpace space_;
    Epoch horizon_;
    std::vector<std::vector<double>> layers_;
};

/// Minimizing action per (epoch, state) for t = 1 .. horizon.
class PolicyTable {
public:
    PolicyTable(StateSpace space, Epoch horizon, ActionMode mode, std::uint64_t fingerprint);

    const StateSpace& space() const { return space_; }
    Epoch horizon() const { return horizon_; }
    ActionMode mode() const { return mode_; }
    std::uint64_t fingerprint() const { return fingerprint_; }

    /// Throws LookupError when t is outside 1..horizon or the state is not on
    /// the sigma grid of this table.
    Action lookup(Epoch t, const State& s) const;

    void store(Epoch t, std::size_t index, Network network, std::span<const Quanta> allocation);

    std::span<const std::uint8_t> networks(Epoch t) const;
    std::span<const std::uint16_t> allocations(Epoch t) const;
    std::span<std::uint8_t> networks(Epoch t);
    std::span<std::uint16_t> allocations(Epoch t);

    bool operator==(const PolicyTable&) const = default;

private:
    StateSpace space_;
    Epoch horizon_;
    ActionMode mode_;
    std::uint64_t fingerprint_;
    std::vector<std::uint8_t> networks_;
    std::vector<std::uint16_t> allocations_;
};

inline Action lookup_action(const PolicyTable& policy, Epoch t, const State& s) {
    return policy.lookup(t, s);
}

struct SolveOptions {
    ActionMode action_mode = ActionMode::Auto;
    unsigned threads = 1;
    std::size_t memory_budget = std::size_t{2} << 30;
};

struct SolveStats {
    std::size_t states_per_epoch = 0;
    std::size_t q_evaluations = 0;
    double seconds = 0.0;
};

struct Solution {
    ValueTable values;
    PolicyTable policy;
    SolveStats stats;
};

/// Joint state space for the scenario (all L locations, 0..B_j per flow).
StateSpace state_space(const Scenario& scenario);

/// Bytes a full solve would hold: every value layer plus every policy layer.
/// Throws SizingError if the state count overflows.
std::size_t estimate_solve_bytes(const Scenario& scenario);

/// Penalty charged when slot t closes: flows whose deadline is t, on their
/// post-action remaining size. The last deadline is left to the boundary
/// layer V_{horizon+1}.
double deadline_penalty(const Scenario& scenario, Epoch t, std::span<const Quanta> after);

/// Boundary V_{horizon+1}(l, b): penalty on flows whose deadline is the horizon.
double terminal_value(const Scenario& scenario, std::span<const Quanta> remaining);

/// One Bellman backup term: stage reward, folded deadline penalty, and the
/// expectation of next_values over the location chain.
/// Throws FeasibilityError for infeasible actions and ConsistencyError when
/// next_values does not cover the state space.
double q_value(const Scenario& scenario, const StateSpace& space, Epoch t, const State& state,
               const Action& action, std::span<const double> next_values);

/// Backward induction from t = horizon down to 1.
Solution backward_induction(const Scenario& scenario, const SolveOptions& options = {});

Policy make_table_policy(std::shared_ptr<const PolicyTable> table, std::string name = "dp");

}  // namespace offload
