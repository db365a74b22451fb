#include "offload/sim.hpp"

#include <cmath>
#include <thread>

#include "offload/errors.hpp"

namespace offload {

double EpisodeResult::finish_rate() const {
    if (finished.empty()) return 1.0;
    std::size_t done = 0;
    for (bool f : finished) done += f ? 1 : 0;
    return static_cast<double>(done) / static_cast<double>(finished.size());
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with_slot(const E& e, Epoch t, LocationId l) {
    throw E("slot " + std::to_string(t) + ", location " + std::to_string(l) + ": " + e.what());
}

}  // namespace

EpisodeResult run_episode(const Scenario& scenario, const Policy& policy,
                          LocationId start_location, Rng& rng, bool record_trace) {
    if (start_location < 0 || start_location >= scenario.location_count()) {
        throw ConfigError("start location " + std::to_string(start_location) + " out of range");
    }
    const std::size_t m = scenario.flow_count();
    EpisodeResult result;
    result.finished.assign(m, false);

    State state{start_location, scenario.total_sizes()};
    for (Epoch t = 1; t <= scenario.horizon; ++t) {
        bool pending = false;
        for (Quanta b : state.remaining) pending = pending || b > 0;
        if (!pending) break;

        Action action;
        try {
            action = policy.decide(t, state);
            check_feasible(scenario, t, state, action);
        } catch (const LookupError& e) {
            rethrow_with_slot(e, t, state.location);
        } catch (const FeasibilityError& e) {
            rethrow_with_slot(e, t, state.location);
        }

        const auto& loc = scenario.locations[static_cast<std::size_t>(state.location)];
        const StageCost cost = stage_cost(state, action, loc, scenario.costs, scenario.sigma, t);
        auto after = apply_action(state, action);

        double due = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (scenario.flows[j].deadline == t) {
                due += penalty(std::span<const Quanta>(&after[j], 1), scenario.costs, scenario.sigma);
            }
        }

        result.monetary_cost += cost.monetary;
        result.raw_energy += cost.raw_energy;
        result.weighted_energy += cost.weighted_energy;
        result.penalty_paid += due;
        if (record_trace) {
            result.trace.push_back({t, state.location, action, after, cost, due});
        }

        state.remaining = std::move(after);
        state.location = next_location(scenario.mobility, state.location, rng);
    }

    // Served flows are frozen after their deadline, so zero remaining at the
    // end means the flow finished in time.
    for (std::size_t j = 0; j < m; ++j) result.finished[j] = state.remaining[j] == 0;
    return result;
}

double trace_energy(const Scenario& scenario, const std::vector<SlotRecord>& trace) {
    double joule = 0.0;
    for (const auto& rec : trace) {
        if (rec.action.network == Network::Idle) continue;
        const auto& loc = scenario.locations[static_cast<std::size_t>(rec.location)];
        joule += loc.energy_rate(rec.action.network) *
                 (static_cast<double>(rec.action.total()) * scenario.sigma);
    }
    return joule;
}

namespace {

// Neumaier summation of a sequence and of its squares' deviations.
class Moments {
public:
    void add(double x) {
        values_.push_back(x);
    }
    double mean() const { return sum(values_) / static_cast<double>(values_.size()); }
    double sd() const {
        const std::size_t n = values_.size();
        if (n < 2) return 0.0;
        const double mu = mean();
        std::vector<double> dev(n);
        for (std::size_t i = 0; i < n; ++i) dev[i] = (values_[i] - mu) * (values_[i] - mu);
        return std::sqrt(sum(dev) / static_cast<double>(n - 1));
    }

private:
    static double sum(const std::vector<double>& v) {
        double s = 0.0;
        double c = 0.0;
        for (double x : v) {
            const double t = s + x;
            c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
            s = t;
        }
        return s + c;
    }
    std::vector<double> values_;
};

}  // namespace

double AggregateReport::se_monetary() const {
    return episodes ? sd_monetary / std::sqrt(static_cast<double>(episodes)) : 0.0;
}
double AggregateReport::se_energy() const {
    return episodes ? sd_energy / std::sqrt(static_cast<double>(episodes)) : 0.0;
}
double AggregateReport::se_objective() const {
    return episodes ? sd_objective / std::sqrt(static_cast<double>(episodes)) : 0.0;
}

AggregateReport monte_carlo(const Scenario& scenario, const Policy& policy,
                            const MonteCarloOptions& options) {
    if (options.episodes < 1) throw ConfigError("episode count must be >= 1");
    const std::size_t n = options.episodes;

    struct Outcome {
        double monetary, energy, objective, finish;
    };
    std::vector<Outcome> outcomes(n);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng(derive_seed(options.base_seed, i));
            const LocationId start =
                options.start_location
                    ? *options.start_location
                    : static_cast<LocationId>(rng.below(static_cast<std::uint64_t>(scenario.location_count())));
            const auto ep = run_episode(scenario, policy, start, rng, false);
            outcomes[i] = {ep.monetary_cost, ep.raw_energy, ep.objective(), ep.finish_rate()};
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned k = 0; k < threads; ++k) {
            pool.emplace_back([&, k] {
                try {
                    run_range(std::min(n, k * chunk), std::min(n, (k + 1) * chunk));
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    Moments monetary, energy, objective, finish;
    for (const auto& o : outcomes) {
        monetary.add(o.monetary);
        energy.add(o.energy);
        objective.add(o.objective);
        finish.add(o.finish);
    }

    AggregateReport r;
    r.policy = policy.name;
    r.fingerprint = scenario_fingerprint(scenario);
    r.scenario_id = fingerprint_hex(r.fingerprint);
    r.seed = options.base_seed;
    r.episodes = n;
    r.theta = scenario.costs.energy_preference;
    r.n_flows = scenario.flow_count();
    r.n_aps = scenario.ap_count();
    r.mean_monetary = monetary.mean();
    r.sd_monetary = monetary.sd();
    r.mean_energy = energy.mean();
    r.sd_energy = energy.sd();
    r.mean_objective = objective.mean();
    r.sd_objective = objective.sd();
    r.finish_rate = finish.mean();
    return r;
}

ValueTable exact_policy_evaluation(const Scenario& scenario, const Policy& policy,
                                   std::size_t memory_budget) {
    scenario.validate();
    if (estimate_solve_bytes(scenario) > memory_budget) {
        throw SizingError("policy evaluation state space exceeds the memory budget");
    }
    const StateSpace space = state_space(scenario);
    ValueTable values(space, scenario.horizon);
    const std::size_t n = space.size();
    {
        auto boundary = values.layer(scenario.horizon + 1);
        for (std::size_t i = 0; i < n; ++i) boundary[i] = terminal_value(scenario, space.state(i).remaining);
    }
    State s;
    s.remaining.resize(scenario.flow_count());
    for (Epoch t = scenario.horizon; t >= 1; --t) {
        const auto next = values.layer(t + 1);
        auto current = values.layer(t);
        for (std::size_t i = 0; i < n; ++i) {
            space.decode(i, s.location, s.remaining);
            Action a;
            try {
                a = policy.decide(t, s);
            } catch (const LookupError& e) {
                throw LookupError("policy undefined at slot " + std::to_string(t) + ": " + e.what());
            }
            current[i] = q_value(scenario, space, t, s, a, next);
        }
    }
    return values;
}

double start_value(const Scenario& scenario, const ValueTable& values, LocationId start) {
    return values.value(1, State{start, scenario.total_sizes()});
}

double uniform_start_value(const Scenario& scenario, const ValueTable& values) {
    double sum = 0.0;
    for (LocationId l = 0; l < scenario.location_count(); ++l) sum += start_value(scenario, values, l);
    return sum / scenario.location_count();
}

}  // namespace offload
