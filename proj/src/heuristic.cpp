#include "offload/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "offload/errors.hpp"

namespace offload {

double default_wlan_speed_threshold(double theta) { return 9.0 + 3.0 * std::min(theta, 2.0); }

HeuristicParams default_heuristic_params(const Scenario& scenario,
                                         std::optional<double> deadline_threshold,
                                         std::optional<double> wlan_speed_threshold) {
    HeuristicParams p;
    p.wlan_speed_threshold =
        wlan_speed_threshold.value_or(default_wlan_speed_threshold(scenario.costs.energy_preference));
    p.deadline_threshold = deadline_threshold;
    double sum = 0.0;
    for (const auto& loc : scenario.locations) sum += loc.cellular_rate;
    p.mean_cellular_rate = scenario.locations.empty() ? 1.0 : sum / scenario.location_count();
    return p;
}

namespace {

void normalize(std::vector<double>& v) {
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (sum <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        return;
    }
    for (double& x : v) x /= sum;
}

}  // namespace

DeadlineWeights deadline_weights(Epoch t, std::span<const FlowSpec> flows,
                                 std::span<const Quanta> remaining) {
    DeadlineWeights out;
    const std::size_t m = flows.size();
    std::vector<double> w(m, 0.0);
    std::vector<double> b(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        b[j] = static_cast<double>(remaining[j]);
        if (t < flows[j].deadline && remaining[j] > 0) {
            out.deadline_remain.push_back(flows[j].deadline - t);
            w[j] = 1.0 / static_cast<double>(flows[j].deadline - t);
        }
    }
    normalize(w);
    normalize(b);
    out.weights.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.weights[j] = w[j] * b[j];
    normalize(out.weights);
    return out;
}

double adaptive_deadline_threshold(Epoch t, std::span<const FlowSpec> flows,
                                   std::span<const Quanta> remaining, double mean_cellular_rate) {
    Quanta smallest = 0;
    bool any = false;
    for (std::size_t j = 0; j < flows.size(); ++j) {
        if (t < flows[j].deadline && remaining[j] > 0) {
            smallest = any ? std::min(smallest, remaining[j]) : remaining[j];
            any = true;
        }
    }
    if (!any || mean_cellular_rate <= 0.0) return 1.0;
    return std::max(1.0, std::ceil(1.5 * static_cast<double>(smallest) / mean_cellular_rate));
}

std::vector<Quanta> proportional_split(Quanta capacity, std::span<const double> weights,
                                       std::span<const Quanta> remaining) {
    const std::size_t m = weights.size();
    std::vector<Quanta> alloc(m, 0);
    std::vector<double> frac(m, 0.0);
    std::vector<std::size_t> weighted;
    Quanta given = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (weights[j] <= 0.0) continue;
        weighted.push_back(j);
        const double ideal = static_cast<double>(capacity) * weights[j];
        alloc[j] = static_cast<Quanta>(std::floor(ideal));
        frac[j] = ideal - std::floor(ideal);
        given += alloc[j];
    }
    if (weighted.empty()) return alloc;

    auto by_frac = weighted;
    std::stable_sort(by_frac.begin(), by_frac.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; given < capacity; k = (k + 1) % by_frac.size()) {
        ++alloc[by_frac[k]];
        ++given;
    }

    Quanta excess = 0;
    for (std::size_t j : weighted) {
        if (alloc[j] > remaining[j]) {
            excess += alloc[j] - remaining[j];
            alloc[j] = remaining[j];
        }
    }
    if (excess > 0) {
        auto by_weight = weighted;
        std::stable_sort(by_weight.begin(), by_weight.end(),
                         [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
        for (std::size_t j : by_weight) {
            const Quanta room = remaining[j] - alloc[j];
            const Quanta extra = std::min(room, excess);
            alloc[j] += extra;
            excess -= extra;
            if (excess == 0) break;
        }
    }
    return alloc;
}

Action heuristic_decide(Epoch t, const State& state, const LocationProfile& location,
                        std::span<const FlowSpec> flows, const HeuristicParams& params) {
    const auto dw = deadline_weights(t, flows, state.remaining);
    Action action = Action::idle(flows.size());
    if (dw.deadline_remain.empty()) return action;

    Network net = Network::Idle;
    if (location.wlan_available && location.wlan_throughput > params.wlan_speed_threshold) {
        net = Network::Wlan;
    } else {
        const double threshold = params.deadline_threshold.value_or(adaptive_deadline_threshold(
            t, flows, state.remaining, params.mean_cellular_rate));
        const Epoch nearest = *std::min_element(dw.deadline_remain.begin(), dw.deadline_remain.end());
        if (static_cast<double>(nearest) < threshold) net = Network::Cellular;
    }
    if (net == Network::Idle) return action;

    auto alloc = proportional_split(location.capacity(net), dw.weights, state.remaining);
    if (std::accumulate(alloc.begin(), alloc.end(), Quanta{0}) == 0) return action;
    action.network = net;
    action.allocation = std::move(alloc);
    return action;
}

Action baseline_decide(Epoch t, const State& state, const LocationProfile& location,
                       std::span<const FlowSpec> flows) {
    const Network net = location.wlan_available ? Network::Wlan : Network::Cellular;
    auto alloc = edf_fill(state.remaining, flows, t, location.capacity(net));
    if (std::accumulate(alloc.begin(), alloc.end(), Quanta{0}) == 0) {
        return Action::idle(flows.size());
    }
    return Action{net, std::move(alloc)};
}

Policy make_heuristic_policy(const Scenario& scenario, const HeuristicParams& params) {
    return Policy{"heuristic",
                  [locations = scenario.locations, flows = scenario.flows, params](
                      Epoch t, const State& s) {
                      return heuristic_decide(t, s, locations.at(static_cast<std::size_t>(s.location)),
                                              flows, params);
                  }};
}

Policy make_baseline_policy(const Scenario& scenario) {
    return Policy{"baseline", [locations = scenario.locations, flows = scenario.flows](
                                  Epoch t, const State& s) {
                      return baseline_decide(t, s, locations.at(static_cast<std::size_t>(s.location)),
                                             flows);
                  }};
}

Solution price_only_policy(const Scenario& scenario, const SolveOptions& options) {
    if (scenario.flow_count() != 1) {
        throw ConfigError("the price-only comparator is defined for single-flow scenarios only (got " +
                          std::to_string(scenario.flow_count()) + " flows)");
    }
    Scenario blind = scenario;
    blind.costs.energy_preference = 0.0;
    blind.costs.theta_schedule.clear();
    return backward_induction(blind, options);
}

}  // namespace offload
