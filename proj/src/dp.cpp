#include "offload/dp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "offload/errors.hpp"

namespace offload {

// ---------------------------------------------------------------------------
// StateSpace

StateSpace::StateSpace(int locations, std::vector<Quanta> max_sizes)
    : locations_(locations), max_sizes_(std::move(max_sizes)) {
    if (locations_ < 1) throw ConfigError("state space needs at least one location");
    strides_.assign(max_sizes_.size(), 1);
    std::size_t stride = 1;
    for (std::size_t j = max_sizes_.size(); j-- > 0;) {
        if (max_sizes_[j] < 0) throw ConfigError("negative flow size in state space");
        strides_[j] = stride;
        const auto extent = static_cast<std::size_t>(max_sizes_[j]) + 1;
        if (stride > std::numeric_limits<std::size_t>::max() / extent) {
            throw SizingError("state space overflows size_t");
        }
        stride *= extent;
    }
    per_location_ = stride;
}

bool StateSpace::contains(const State& s) const {
    if (s.location < 0 || s.location >= locations_) return false;
    if (s.remaining.size() != max_sizes_.size()) return false;
    for (std::size_t j = 0; j < max_sizes_.size(); ++j) {
        if (s.remaining[j] < 0 || s.remaining[j] > max_sizes_[j]) return false;
    }
    return true;
}

std::size_t StateSpace::index(LocationId l, std::span<const Quanta> remaining) const {
    std::size_t idx = static_cast<std::size_t>(l) * per_location_;
    for (std::size_t j = 0; j < remaining.size(); ++j) {
        idx += static_cast<std::size_t>(remaining[j]) * strides_[j];
    }
    return idx;
}

std::size_t StateSpace::index(const State& s) const { return index(s.location, s.remaining); }

void StateSpace::decode(std::size_t index, LocationId& l, std::span<Quanta> remaining) const {
    l = static_cast<LocationId>(index / per_location_);
    std::size_t rest = index % per_location_;
    for (std::size_t j = 0; j < max_sizes_.size(); ++j) {
        remaining[j] = static_cast<Quanta>(rest / strides_[j]);
        rest %= strides_[j];
    }
}

State StateSpace::state(std::size_t index) const {
    State s;
    s.remaining.resize(max_sizes_.size());
    decode(index, s.location, s.remaining);
    return s;
}

// ---------------------------------------------------------------------------
// ValueTable / PolicyTable

ValueTable::ValueTable(StateSpace space, Epoch horizon)
    : space_(std::move(space)), horizon_(horizon) {
    layers_.assign(static_cast<std::size_t>(horizon_) + 1, std::vector<double>(space_.size(), 0.0));
}

std::span<const double> ValueTable::layer(Epoch t) const {
    if (t < 1 || t > horizon_ + 1) throw LookupError("value layer " + std::to_string(t) + " out of range");
    return layers_[static_cast<std::size_t>(t) - 1];
}

std::span<double> ValueTable::layer(Epoch t) {
    if (t < 1 || t > horizon_ + 1) throw LookupError("value layer " + std::to_string(t) + " out of range");
    return layers_[static_cast<std::size_t>(t) - 1];
}

double ValueTable::value(Epoch t, const State& s) const {
    if (!space_.contains(s)) throw LookupError("state outside the value table domain");
    return layer(t)[space_.index(s)];
}

PolicyTable::PolicyTable(StateSpace space, Epoch horizon, ActionMode mode,
                         std::uint64_t fingerprint)
    : space_(std::move(space)), horizon_(horizon), mode_(mode), fingerprint_(fingerprint) {
    const auto cells = static_cast<std::size_t>(horizon_) * space_.size();
    networks_.assign(cells, static_cast<std::uint8_t>(Network::Idle));
    allocations_.assign(cells * space_.flows(), 0);
}

std::span<const std::uint8_t> PolicyTable::networks(Epoch t) const {
    const auto n = space_.size();
    return std::span<const std::uint8_t>(networks_).subspan(static_cast<std::size_t>(t - 1) * n, n);
}

std::span<std::uint8_t> PolicyTable::networks(Epoch t) {
    const auto n = space_.size();
    return std::span<std::uint8_t>(networks_).subspan(static_cast<std::size_t>(t - 1) * n, n);
}

std::span<const std::uint16_t> PolicyTable::allocations(Epoch t) const {
    const auto n = space_.size() * space_.flows();
    return std::span<const std::uint16_t>(allocations_).subspan(static_cast<std::size_t>(t - 1) * n, n);
}

std::span<std::uint16_t> PolicyTable::allocations(Epoch t) {
    const auto n = space_.size() * space_.flows();
    return std::span<std::uint16_t>(allocations_).subspan(static_cast<std::size_t>(t - 1) * n, n);
}

void PolicyTable::store(Epoch t, std::size_t index, Network network,
                        std::span<const Quanta> allocation) {
    networks(t)[index] = static_cast<std::uint8_t>(network);
    auto dst = allocations(t).subspan(index * space_.flows(), space_.flows());
    for (std::size_t j = 0; j < dst.size(); ++j) {
        if (allocation[j] > std::numeric_limits<std::uint16_t>::max()) {
            throw SizingError("allocation does not fit the policy table encoding");
        }
        dst[j] = static_cast<std::uint16_t>(allocation[j]);
    }
}

Action PolicyTable::lookup(Epoch t, const State& s) const {
    if (t < 1 || t > horizon_) {
        throw LookupError("epoch " + std::to_string(t) + " outside policy range 1.." +
                          std::to_string(horizon_));
    }
    if (!space_.contains(s)) {
        throw LookupError("state at location " + std::to_string(s.location) +
                          " is outside the policy table (sigma misalignment?)");
    }
    const auto idx = space_.index(s);
    Action a;
    a.network = static_cast<Network>(networks(t)[idx]);
    const auto src = allocations(t).subspan(idx * space_.flows(), space_.flows());
    a.allocation.assign(src.begin(), src.end());
    return a;
}

// ---------------------------------------------------------------------------
// Bellman backup

StateSpace state_space(const Scenario& scenario) {
    return StateSpace(scenario.location_count(), scenario.total_sizes());
}

std::size_t estimate_solve_bytes(const Scenario& scenario) {
    long double states = scenario.location_count();
    for (const auto& f : scenario.flows) states *= static_cast<long double>(f.total_size) + 1;
    const long double m = static_cast<long double>(scenario.flow_count());
    const long double t = scenario.horizon;
    const long double bytes = (t + 1) * states * 8.0L + t * states * (1.0L + 2.0L * m);
    if (bytes > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2)) {
        throw SizingError("state space size overflows");
    }
    return static_cast<std::size_t>(bytes);
}

double deadline_penalty(const Scenario& scenario, Epoch t, std::span<const Quanta> after) {
    if (t >= scenario.horizon) return 0.0;
    Quanta due = 0;
    for (std::size_t j = 0; j < scenario.flows.size(); ++j) {
        if (scenario.flows[j].deadline == t) due += after[j];
    }
    return due == 0 ? 0.0 : scenario.costs.penalty_coefficient * static_cast<double>(due) * scenario.sigma;
}

double terminal_value(const Scenario& scenario, std::span<const Quanta> remaining) {
    Quanta due = 0;
    for (std::size_t j = 0; j < scenario.flows.size(); ++j) {
        if (scenario.flows[j].deadline == scenario.horizon) due += remaining[j];
    }
    return scenario.costs.penalty_coefficient * static_cast<double>(due) * scenario.sigma;
}

namespace {

// Shared by q_value and the solver so both produce bit-identical results.
// `after` is scratch of length M.
double backup_term(const Scenario& sc, const StateSpace& space, Epoch t, LocationId l,
                   std::span<const Quanta> remaining, Network network,
                   std::span<const Quanta> alloc, std::span<const double> next,
                   std::span<Quanta> after) {
    const auto& loc = sc.locations[static_cast<std::size_t>(l)];
    Quanta served = 0;
    for (std::size_t j = 0; j < remaining.size(); ++j) {
        const Quanta a = std::min(remaining[j], alloc[j]);
        served += a;
        after[j] = remaining[j] - a;
    }
    double stage = 0.0;
    if (network != Network::Idle && served > 0) {
        const double mbit = static_cast<double>(served) * sc.sigma;
        if (network == Network::Cellular) stage += sc.costs.price_per_mbit * mbit;
        stage += sc.costs.theta_at(t) * (loc.energy_rate(network) * mbit);
    }
    const double due = deadline_penalty(sc, t, after);

    const std::size_t offset = space.index(0, after);
    double expected = 0.0;
    for (const auto& tr : sc.mobility.row(l)) {
        expected += tr.probability * next[static_cast<std::size_t>(tr.to) * space.per_location() + offset];
    }
    return stage + due + expected;
}

}  // namespace

double q_value(const Scenario& scenario, const StateSpace& space, Epoch t, const State& state,
               const Action& action, std::span<const double> next_values) {
    check_feasible(scenario, t, state, action);
    if (!space.contains(state)) throw ConsistencyError("state outside the state space");
    if (next_values.size() != space.size()) {
        throw ConsistencyError("next-epoch values cover " + std::to_string(next_values.size()) +
                               " states, expected " + std::to_string(space.size()));
    }
    std::vector<Quanta> after(state.remaining.size());
    return backup_term(scenario, space, t, state.location, state.remaining, action.network,
                       action.allocation, next_values, after);
}

Solution backward_induction(const Scenario& scenario, const SolveOptions& options) {
    scenario.validate();
    const auto started = std::chrono::steady_clock::now();
    const ActionMode mode = resolve_action_mode(options.action_mode, scenario.flow_count());

    const std::size_t bytes = estimate_solve_bytes(scenario);
    if (bytes > options.memory_budget) {
        std::string product = std::to_string(scenario.location_count());
        for (const auto& f : scenario.flows) product += " x " + std::to_string(f.total_size + 1);
        throw SizingError("state space L * prod(B_j/sigma + 1) = " + product + " states/epoch over " +
                          std::to_string(scenario.horizon) + " epochs needs ~" +
                          std::to_string(bytes >> 20) + " MiB, budget is " +
                          std::to_string(options.memory_budget >> 20) + " MiB");
    }

    StateSpace space = state_space(scenario);
    Solution sol{ValueTable(space, scenario.horizon),
                 PolicyTable(space, scenario.horizon, mode, scenario_fingerprint(scenario)),
                 SolveStats{}};
    sol.stats.states_per_epoch = space.size();
    const std::size_t m = scenario.flow_count();
    const std::size_t n = space.size();

    {
        auto boundary = sol.values.layer(scenario.horizon + 1);
        std::vector<Quanta> rem(m);
        LocationId l;
        for (std::size_t i = 0; i < n; ++i) {
            space.decode(i, l, rem);
            boundary[i] = terminal_value(scenario, rem);
        }
    }

    const unsigned threads = std::max(1u, options.threads);
    std::vector<std::size_t> evaluations(threads, 0);

    for (Epoch t = scenario.horizon; t >= 1; --t) {
        const auto next = sol.values.layer(t + 1);
        auto current = sol.values.layer(t);

        auto sweep = [&](std::size_t begin, std::size_t end, std::size_t& count) {
            State s;
            s.remaining.resize(m);
            std::vector<Quanta> after(m);
            std::vector<Quanta> best_alloc(m);
            for (std::size_t i = begin; i < end; ++i) {
                space.decode(i, s.location, s.remaining);
                const auto& loc = scenario.locations[static_cast<std::size_t>(s.location)];
                double best = std::numeric_limits<double>::infinity();
                Network best_net = Network::Idle;
                for_each_action(s, loc, t, scenario.flows, mode,
                                [&](Network net, std::span<const Quanta> a) {
                                    const double q = backup_term(scenario, space, t, s.location,
                                                                 s.remaining, net, a, next, after);
                                    ++count;
                                    if (q < best) {
                                        best = q;
                                        best_net = net;
                                        std::copy(a.begin(), a.end(), best_alloc.begin());
                                    }
                                });
                current[i] = best;
                sol.policy.store(t, i, best_net, best_alloc);
            }
        };

        if (threads == 1) {
            sweep(0, n, evaluations[0]);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (n + threads - 1) / threads;
            for (unsigned k = 0; k < threads; ++k) {
                const std::size_t begin = std::min(n, k * chunk);
                const std::size_t end = std::min(n, begin + chunk);
                pool.emplace_back(sweep, begin, end, std::ref(evaluations[k]));
            }
            for (auto& th : pool) th.join();
        }
    }

    for (auto c : evaluations) sol.stats.q_evaluations += c;
    sol.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return sol;
}

Policy make_table_policy(std::shared_ptr<const PolicyTable> table, std::string name) {
    return Policy{std::move(name), [table = std::move(table)](Epoch t, const State& s) {
                      return table->lookup(t, s);
                  }};
}

}  // namespace offload
