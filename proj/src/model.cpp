#include "offload/model.hpp"

#include <bit>
#include <cstdio>
#include <numeric>

#include "offload/errors.hpp"

namespace offload {

const char* to_string(Network n) {
    switch (n) {
        case Network::Idle: return "idle";
        case Network::Wlan: return "wlan";
        case Network::Cellular: return "cellular";
    }
    return "?";
}

Quanta Action::total() const {
    return std::accumulate(allocation.begin(), allocation.end(), Quanta{0});
}

int Scenario::ap_count() const {
    int n = 0;
    for (const auto& loc : locations) n += loc.wlan_available ? 1 : 0;
    return n;
}

std::vector<Quanta> Scenario::total_sizes() const {
    std::vector<Quanta> sizes;
    sizes.reserve(flows.size());
    for (const auto& f : flows) sizes.push_back(f.total_size);
    return sizes;
}

void Scenario::validate() const {
    if (grid_width < 1 || grid_height < 1) throw ConfigError("grid must be at least 1x1");
    const int l = grid_width * grid_height;
    if (location_count() != l) {
        throw ConfigError("expected " + std::to_string(l) + " locations, got " +
                          std::to_string(location_count()));
    }
    if (mobility.size() != l) throw ConfigError("mobility model size does not match the grid");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(slot_seconds > 0.0)) throw ConfigError("slot length must be positive");
    for (int i = 0; i < l; ++i) {
        const auto& loc = locations[static_cast<std::size_t>(i)];
        const std::string where = "location " + std::to_string(i) + ": ";
        if (loc.id != i) throw ConfigError(where + "id out of order");
        if (loc.cellular_rate <= 0) throw ConfigError(where + "cellular rate must be positive");
        if (loc.wlan_available != (loc.wlan_rate > 0)) {
            throw ConfigError(where + "WLAN availability and WLAN rate disagree");
        }
        if (loc.cellular_energy < 0.0 || loc.wlan_energy < 0.0) {
            throw ConfigError(where + "negative energy rate");
        }
    }
    if (flows.empty()) throw ConfigError("scenario needs at least one flow");
    Epoch last = 0;
    for (std::size_t j = 0; j < flows.size(); ++j) {
        const auto& f = flows[j];
        const std::string where = "flow " + std::to_string(j) + ": ";
        if (f.total_size < 0) throw ConfigError(where + "negative size");
        if (f.deadline < 1) throw ConfigError(where + "deadline must be >= 1");
        if (f.deadline < last) throw ConfigError(where + "flows must be sorted by deadline");
        last = f.deadline;
    }
    if (horizon != last) throw ConfigError("horizon must equal the last flow deadline");
    const auto& c = costs;
    if (c.price_per_mbit < 0.0 || c.energy_preference < 0.0 || c.penalty_coefficient < 0.0) {
        throw ConfigError("cost parameters must be non-negative");
    }
    for (double th : c.theta_schedule) {
        if (th < 0.0) throw ConfigError("theta schedule entries must be non-negative");
    }
}

namespace {

struct Fnv {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001B3ULL;
        }
    }
    void u64(std::uint64_t v) {
        // Fixed little-endian byte order.
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(b, 8);
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

}  // namespace

std::uint64_t scenario_fingerprint(const Scenario& s) {
    Fnv f;
    f.i64(s.grid_width);
    f.i64(s.grid_height);
    for (const auto& loc : s.locations) {
        f.i64(loc.id);
        f.i64(loc.wlan_available ? 1 : 0);
        f.i64(loc.cellular_rate);
        f.i64(loc.wlan_rate);
        f.f64(loc.cellular_throughput);
        f.f64(loc.wlan_throughput);
        f.f64(loc.cellular_energy);
        f.f64(loc.wlan_energy);
    }
    for (double p : s.mobility.matrix()) f.f64(p);
    for (const auto& fl : s.flows) {
        f.i64(fl.id);
        f.i64(fl.total_size);
        f.i64(fl.deadline);
    }
    f.i64(s.horizon);
    f.f64(s.costs.price_per_mbit);
    f.f64(s.costs.energy_preference);
    f.f64(s.costs.penalty_coefficient);
    for (double th : s.costs.theta_schedule) f.f64(th);
    f.f64(s.sigma);
    f.f64(s.slot_seconds);
    f.u64(s.rng_seed);
    return f.h;
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint));
    return buf;
}

void check_basic_feasibility(const State& state, const Action& action) {
    if (action.allocation.size() != state.remaining.size()) {
        throw FeasibilityError("allocation has " + std::to_string(action.allocation.size()) +
                               " entries for " + std::to_string(state.remaining.size()) + " flows");
    }
    for (std::size_t j = 0; j < action.allocation.size(); ++j) {
        const Quanta a = action.allocation[j];
        if (a < 0) throw FeasibilityError("negative allocation for flow " + std::to_string(j));
        if (a > 0 && action.network == Network::Idle) {
            throw FeasibilityError("idle action carries a nonzero allocation");
        }
        if (a > state.remaining[j]) {
            throw FeasibilityError("allocation exceeds remaining size of flow " + std::to_string(j));
        }
    }
}

void check_feasible(const Scenario& scenario, Epoch t, const State& state, const Action& action) {
    if (state.location < 0 || state.location >= scenario.location_count()) {
        throw FeasibilityError("location " + std::to_string(state.location) + " out of range");
    }
    check_basic_feasibility(state, action);
    const auto& loc = scenario.locations[static_cast<std::size_t>(state.location)];
    if (action.network == Network::Wlan && !loc.wlan_available) {
        throw FeasibilityError("WLAN action at location " + std::to_string(state.location) +
                               " which has no access point");
    }
    if (action.network != Network::Idle && action.total() > loc.capacity(action.network)) {
        throw FeasibilityError(std::string("allocation exceeds ") + to_string(action.network) +
                               " capacity at location " + std::to_string(state.location));
    }
    for (std::size_t j = 0; j < action.allocation.size(); ++j) {
        if (action.allocation[j] > 0 && t > scenario.flows[j].deadline) {
            throw FeasibilityError("flow " + std::to_string(j) + " served after its deadline");
        }
    }
}

namespace {

Quanta served(const State& state, const Action& action) {
    Quanta sum = 0;
    for (std::size_t j = 0; j < action.allocation.size(); ++j) {
        sum += std::min(state.remaining[j], action.allocation[j]);
    }
    return sum;
}

}  // namespace

double monetary_cost(const State& state, const Action& action, const CostParams& costs,
                     double sigma) {
    check_basic_feasibility(state, action);
    if (action.network != Network::Cellular) return 0.0;
    return costs.price_per_mbit * static_cast<double>(served(state, action)) * sigma;
}

EnergyCost energy_cost(const State& state, const Action& action,
                       const LocationProfile& location, const CostParams& costs, double sigma,
                       Epoch t) {
    check_basic_feasibility(state, action);
    if (action.network == Network::Idle) return {};
    const double mbit = static_cast<double>(served(state, action)) * sigma;
    const double raw = location.energy_rate(action.network) * mbit;
    return {raw, costs.theta_at(t) * raw};
}

double penalty(std::span<const Quanta> remaining, const CostParams& costs, double sigma) {
    Quanta sum = 0;
    for (Quanta b : remaining) sum += b;
    return costs.penalty_coefficient * static_cast<double>(sum) * sigma;
}

StageCost stage_cost(const State& state, const Action& action, const LocationProfile& location,
                     const CostParams& costs, double sigma, Epoch t) {
    const auto e = energy_cost(state, action, location, costs, sigma, t);
    return {monetary_cost(state, action, costs, sigma), e.raw, e.weighted};
}

std::vector<Quanta> apply_action(const State& state, const Action& action) {
    check_basic_feasibility(state, action);
    std::vector<Quanta> next(state.remaining.size());
    for (std::size_t j = 0; j < next.size(); ++j) {
        next[j] = std::max<Quanta>(0, state.remaining[j] - action.allocation[j]);
    }
    return next;
}

ActionMode resolve_action_mode(ActionMode mode, std::size_t flows) {
    if (mode != ActionMode::Auto) return mode;
    return flows >= 2 ? ActionMode::EdfRestricted : ActionMode::Exhaustive;
}

const char* to_string(ActionMode mode) {
    switch (mode) {
        case ActionMode::Auto: return "auto";
        case ActionMode::Exhaustive: return "exhaustive";
        case ActionMode::EdfRestricted: return "edf";
    }
    return "?";
}

ActionMode parse_action_mode(const std::string& text) {
    if (text == "auto") return ActionMode::Auto;
    if (text == "exhaustive") return ActionMode::Exhaustive;
    if (text == "edf" || text == "edf-restricted") return ActionMode::EdfRestricted;
    throw ConfigError("unknown action mode '" + text + "' (expected auto, exhaustive or edf)");
}

std::vector<Quanta> edf_fill(std::span<const Quanta> remaining, std::span<const FlowSpec> flows,
                             Epoch t, Quanta capacity) {
    std::vector<std::size_t> order(flows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return flows[a].deadline < flows[b].deadline;
    });
    std::vector<Quanta> alloc(flows.size(), 0);
    Quanta left = capacity;
    for (std::size_t j : order) {
        if (left <= 0) break;
        if (!flow_active(flows[j], t, remaining[j])) continue;
        alloc[j] = std::min(left, remaining[j]);
        left -= alloc[j];
    }
    return alloc;
}

std::vector<Action> enumerate_actions(const State& state, const LocationProfile& location,
                                      Epoch t, std::span<const FlowSpec> flows, ActionMode mode) {
    std::vector<Action> out;
    for_each_action(state, location, t, flows, resolve_action_mode(mode, flows.size()),
                    [&](Network n, std::span<const Quanta> a) {
                        out.push_back({n, std::vector<Quanta>(a.begin(), a.end())});
                    });
    return out;
}

}  // namespace offload
