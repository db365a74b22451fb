// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "offload/cli.hpp"
#include "offload/config.hpp"
#include "offload/dp.hpp"
#include "offload/energy_curve.hpp"
#include "offload/errors.hpp"
#include "offload/heuristic.hpp"
#include "offload/mobility.hpp"
#include "offload/oracle.hpp"
#include "offload/sim.hpp"

using namespace offload;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Interval {
    double lo, hi;
};

Interval ci95(double mean, double se) { return {mean - 1.96 * se, mean + 1.96 * se}; }

const AggregateReport& find(const std::vector<AggregateReport>& rs, const std::string& policy, double theta) {
    for (const auto& r : rs) {
        if (r.policy == policy && r.theta == theta) return r;
    }
    throw std::runtime_error("no report for " + policy);
}

// Instances shared by the optimality and dominance checks.
std::vector<std::pair<Scenario, LocationId>> ci_instances(std::size_t count) {
    std::vector<std::pair<Scenario, LocationId>> out;
    for (std::uint64_t i = 0; out.size() < count && i < 100 * count; ++i) {
        Rng rng(derive_seed(0, i));
        Scenario sc = random_tiny_scenario(rng);
        const auto start = static_cast<LocationId>(rng.below(static_cast<std::uint64_t>(sc.location_count())));
        out.emplace_back(std::move(sc), start);
    }
    return out;
}

void oracle_optimality() {
    const auto start_time = Clock::now();
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    double worst = 0.0;
    bool shapes_ok = true;
    for (const auto& [sc, start] : ci_instances(30)) {
        double brute = 0.0;
        try {
            brute = brute_force_value(sc, start);
        } catch (const SizingError&) {
            continue;
        }
        SolveOptions so;
        so.action_mode = ActionMode::Exhaustive;
        const double dp = start_value(sc, backward_induction(sc, so).values, start);
        const double err = std::abs(dp - brute);
        worst = std::max(worst, err);
        mismatches += err <= 1e-9 ? 0 : 1;
        ++checked;
        const int l = sc.location_count();
        shapes_ok = shapes_ok && (l == 1 || l == 2 || l == 4) && sc.horizon <= 4 && sc.flow_count() <= 2;
        for (Quanta b : sc.total_sizes()) shapes_ok = shapes_ok && b <= 4;
    }
    const double secs = seconds_since(start_time);
    report(1, checked >= 25 && mismatches == 0 && shapes_ok && secs < 30.0,
           fmt("%zu instances, %zu mismatches, max |dp-brute| %.3g, %.2f s", checked, mismatches, worst, secs));
}

void policy_dominance() {
    const auto start_time = Clock::now();
    std::size_t instances = 0;
    std::size_t dp_violations = 0;
    std::size_t heuristic_violations = 0;
    double worst_gap = 0.0;
    for (const auto& [sc, unused] : ci_instances(30)) {
        (void)unused;
        SolveOptions so;
        so.action_mode = ActionMode::Exhaustive;
        const auto sol = backward_induction(sc, so);
        const auto heur = exact_policy_evaluation(sc, make_heuristic_policy(sc, default_heuristic_params(sc)));
        const auto base = exact_policy_evaluation(sc, make_baseline_policy(sc));
        for (LocationId l = 0; l < sc.location_count(); ++l) {
            const double d = start_value(sc, sol.values, l);
            const double h = start_value(sc, heur, l);
            const double b = start_value(sc, base, l);
            dp_violations += d <= h + 1e-12 * std::max(1.0, std::abs(h)) ? 0 : 1;
            if (h > b * (1.0 + 1e-12)) {
                ++heuristic_violations;
                worst_gap = std::max(worst_gap, h - b);
            }
        }
        ++instances;
    }

    auto config = desk_preset();
    RunSettings settings;
    settings.policies = {"dp", "heuristic", "baseline"};
    const auto reports = evaluate_policies(config, settings);
    const auto& dp = find(reports, "dp", config.theta);
    const auto& h = find(reports, "heuristic", config.theta);
    const auto& b = find(reports, "baseline", config.theta);
    const Interval cd = ci95(dp.mean_monetary, dp.se_monetary());
    const Interval ch = ci95(h.mean_monetary, h.se_monetary());
    const Interval cb = ci95(b.mean_monetary, b.se_monetary());
    const bool mc_ok = cd.hi < ch.lo && ch.hi < cb.lo;
    const double secs = seconds_since(start_time);

    report(2, dp_violations == 0 && heuristic_violations == 0 && mc_ok && secs < 300.0,
           fmt("exact: %zu instances, dp>heuristic at %zu starts, heuristic>baseline at %zu starts "
               "(max excess %.4g); desk %zu episodes monetary dp [%.3f, %.3f] heuristic [%.3f, %.3f] "
               "baseline [%.3f, %.3f]; %.1f s",
               instances, dp_violations, heuristic_violations, worst_gap, dp.episodes, cd.lo, cd.hi, ch.lo,
               ch.hi, cb.lo, cb.hi, secs));
}

void energy_vs_theta() {
    const auto config = single_flow_desk_preset();
    const std::vector<double> thetas{0.0, 0.5, 1.0, 2.0};
    RunSettings settings;
    settings.policies = {"dp", "heuristic", "price_only"};
    const auto reports = run_sweep(config, SweepAxis::Theta, thetas, settings);

    bool ok = true;
    std::string detail;
    for (const char* policy : {"dp", "heuristic"}) {
        detail += std::string(policy) + " energy";
        for (std::size_t k = 0; k < thetas.size(); ++k) {
            const auto& r = find(reports, policy, thetas[k]);
            detail += fmt(" %.2f", r.mean_energy);
            if (k == 0) continue;
            const auto& prev = find(reports, policy, thetas[k - 1]);
            const double noise = std::hypot(r.se_energy(), prev.se_energy());
            if (r.mean_energy - prev.mean_energy > 3.0 * noise) ok = false;
        }
        detail += "; ";
    }
    const auto& dp = find(reports, "dp", 2.0);
    const auto& po = find(reports, "price_only", 2.0);
    const Interval cd = ci95(dp.mean_energy, dp.se_energy());
    const Interval cp = ci95(po.mean_energy, po.se_energy());
    ok = ok && cp.lo > cd.hi;
    detail += fmt("theta=2 price-only [%.2f, %.2f] vs dp [%.2f, %.2f]", cp.lo, cp.hi, cd.lo, cd.hi);
    report(3, ok, detail);
}

// Every adjacent step moves in `direction` (+1 or -1), with at most one tie.
bool monotone_with_one_tie(const std::vector<double>& v, int direction) {
    int ties = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double step = (v[k] - v[k - 1]) * direction;
        if (step == 0.0) {
            ++ties;
        } else if (step < 0.0) {
            return false;
        }
    }
    return ties <= 1;
}

void ap_trends() {
    const auto config = ap_sweep_preset();
    const std::vector<double> levels{4, 8, 12, 16};
    RunSettings settings;
    settings.policies = {"dp", "heuristic", "baseline"};
    const auto reports = run_sweep(config, SweepAxis::Aps, levels, settings);

    auto series = [&](const std::string& policy, bool monetary) {
        std::vector<double> v;
        for (const auto& r : reports) {
            if (r.policy == policy) v.push_back(monetary ? r.mean_monetary : r.finish_rate);
        }
        return v;
    };
    bool ok = true;
    std::string detail;
    for (const char* p : {"dp", "heuristic", "baseline"}) {
        const auto cost = series(p, true);
        ok = ok && cost.size() == 4 && monotone_with_one_tie(cost, -1);
        detail += fmt("%s cost %.2f %.2f %.2f %.2f; ", p, cost[0], cost[1], cost[2], cost[3]);
    }
    for (const char* p : {"dp", "heuristic"}) {
        const auto fr = series(p, false);
        ok = ok && fr.size() == 4 && monotone_with_one_tie(fr, +1);
        detail += fmt("%s finish %.3f %.3f %.3f %.3f; ", p, fr[0], fr[1], fr[2], fr[3]);
    }
    detail.resize(detail.size() - 2);
    report(4, ok, detail);
}

void curve_fit() {
    const std::vector<EnergySample> samples{{11.257, 0.7107}, {16.529, 0.484}, {21.433, 0.3733}};
    const auto fit = fit_energy_curve(samples);
    const double f1_at = kCurveF1(11.257);
    const bool ok = std::abs(fit.curve.amplitude - 1.4274) <= 0.05 * 1.4274 &&
                    std::abs(fit.curve.decay - 0.063) <= 0.10 * 0.063 &&
                    std::abs(f1_at - 0.7107) <= 0.02 * 0.7107;
    report(5, ok, fmt("amplitude %.4f, decay %.4f, f1(11.257) = %.4f", fit.curve.amplitude, fit.curve.decay, f1_at));
}

Scenario with_curve(Scenario sc, const EnergyCurve& curve) {
    for (auto& l : sc.locations) {
        l.cellular_energy = curve(l.cellular_throughput);
        if (l.wlan_available) l.wlan_energy = curve(l.wlan_throughput);
    }
    return sc;
}

void curve_dominance() {
    const auto config = desk_preset();
    const Scenario f1 = build_scenario(config);
    const Scenario f2 = with_curve(f1, kCurveF2);
    const auto sol = backward_induction(f1);
    const std::vector<Policy> policies{
        make_table_policy(std::make_shared<const PolicyTable>(sol.policy)),
        make_heuristic_policy(f1, default_heuristic_params(f1)), make_baseline_policy(f1)};
    std::size_t episodes = 0;
    std::size_t violations = 0;
    double sum1 = 0.0;
    double sum2 = 0.0;
    for (const auto& policy : policies) {
        for (std::size_t i = 0; i < 300; ++i) {
            Rng rng(derive_seed(config.seed, i));
            const auto start = static_cast<LocationId>(rng.below(static_cast<std::uint64_t>(f1.location_count())));
            const auto ep = run_episode(f1, policy, start, rng);
            const double e1 = trace_energy(f1, ep.trace);
            const double e2 = trace_energy(f2, ep.trace);
            violations += e2 < e1 ? 0 : 1;
            sum1 += e1;
            sum2 += e2;
            ++episodes;
        }
    }
    report(6, violations == 0,
           fmt("%zu episodes, %zu without strict f2 < f1; mean joule f1 %.2f, f2 %.2f", episodes, violations,
               sum1 / episodes, sum2 / episodes));
}

void monte_carlo_consistency() {
    // First oracle instance with a stochastic outcome under the optimal policy.
    for (const auto& [sc, start] : ci_instances(200)) {
        if (sc.location_count() < 2) continue;
        const auto sol = backward_induction(sc);
        const double exact = start_value(sc, sol.values, start);
        MonteCarloOptions mc;
        mc.episodes = 100000;
        mc.base_seed = 7;
        mc.start_location = start;
        const auto r = monte_carlo(sc, make_table_policy(std::make_shared<const PolicyTable>(sol.policy)), mc);
        if (r.sd_objective == 0.0) continue;
        const double z = (r.mean_objective - exact) / r.se_objective();
        report(7, std::abs(z) <= 3.0,
               fmt("L=%d T=%d M=%zu: exact %.6f, mean %.6f over %zu episodes, z = %.2f", sc.location_count(),
                   sc.horizon, sc.flow_count(), exact, r.mean_objective, r.episodes, z));
        return;
    }
    report(7, false, "no oracle instance with a stochastic cost");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_values(const Solution& a, const Solution& b) {
    for (Epoch t = 1; t <= a.values.horizon() + 1; ++t) {
        const auto x = a.values.layer(t);
        const auto y = b.values.layer(t);
        if (x.size() != y.size() || std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) return false;
    }
    return true;
}

void determinism() {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "offload_acceptance";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "ap.json") << emit_config(ap_sweep_preset());
    }
    std::ostringstream out, err;
    bool cli_ok = true;
    for (const char* name : {"a.csv", "b.csv"}) {
        cli_ok = cli_ok && cli_main({"--seed", "42", "--out", (dir / name).string(), "sweep", "--config",
                                     (dir / "ap.json").string(), "--axis", "aps", "--values", "4,8,12,16"},
                                    out, err) == 0;
    }
    const std::string a = slurp(dir / "a.csv");
    const bool csv_same = cli_ok && !a.empty() && a == slurp(dir / "b.csv");
    fs::remove_all(dir);

    const Scenario sc = build_scenario(desk_preset());
    SolveOptions one, four;
    four.threads = 4;
    const auto s1 = backward_induction(sc, one);
    const auto s4 = backward_induction(sc, four);
    const bool tables_same = s1.policy == s4.policy && same_values(s1, s4);
    report(8, csv_same && tables_same,
           fmt("sweep csv %s (%zu bytes); dp tables with 1 and 4 threads %s", csv_same ? "identical" : "DIFFER",
               a.size(), tables_same ? "bit-identical" : "DIFFER"));
}

Scenario timing_scenario(std::size_t m, Epoch horizon) {
    auto config = desk_preset();
    config.sigma = 1.0;
    config.flows.clear();
    for (std::size_t j = 0; j < m; ++j) {
        config.flows.push_back({static_cast<double>(400 + 37 * j),
                                static_cast<int>(horizon / 2 + (horizon / 2) * (j + 1) / m)});
    }
    return build_scenario(config);
}

void heuristic_complexity() {
    const std::vector<std::size_t> ms{1, 2, 4, 8, 16};
    std::vector<double> per_decision;
    for (std::size_t m : ms) {
        const Scenario sc = timing_scenario(m, 560);
        const auto params = default_heuristic_params(sc);
        Rng rng(100 + m);
        std::vector<State> states;
        for (int k = 0; k < 512; ++k) {
            State s{static_cast<LocationId>(rng.below(16)), {}};
            for (const auto& f : sc.flows) {
                s.remaining.push_back(static_cast<Quanta>(rng.below(static_cast<std::uint64_t>(f.total_size) + 1)));
            }
            states.push_back(std::move(s));
        }
        const int calls = 40000;
        double best = 1e9;
        std::size_t sink = 0;
        for (int rep = 0; rep < 7; ++rep) {
            const auto t0 = Clock::now();
            for (int c = 0; c < calls; ++c) {
                const auto& s = states[static_cast<std::size_t>(c) % states.size()];
                const Epoch t = 1 + c % 200;
                const auto a = heuristic_decide(t, s, sc.locations[static_cast<std::size_t>(s.location)], sc.flows, params);
                sink += static_cast<std::size_t>(a.total());
            }
            best = std::min(best, seconds_since(t0) / calls);
        }
        if (sink == 42) std::printf(" ");
        per_decision.push_back(best);
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(ms.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ms.size()));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        x(static_cast<Eigen::Index>(k), 0) = 1.0;
        x(static_cast<Eigen::Index>(k), 1) = static_cast<double>(ms[k]);
        y(static_cast<Eigen::Index>(k)) = per_decision[k];
    }
    const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
    const double ss_res = (y - x * beta).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    const double r2 = 1.0 - ss_res / ss_tot;

    const Scenario big = timing_scenario(4, 560);
    const Policy heuristic = make_heuristic_policy(big, default_heuristic_params(big));
    Rng rng(5);
    const auto t0 = Clock::now();
    const auto ep = run_episode(big, heuristic, 0, rng, false);
    const double run_secs = seconds_since(t0);

    std::string times;
    for (std::size_t k = 0; k < ms.size(); ++k) times += fmt(" M=%zu %.0fns", ms[k], per_decision[k] * 1e9);
    report(9, r2 > 0.9 && beta(1) > 0.0 && run_secs < 1.0 && big.horizon == 560,
           fmt("per decision%s; slope %.1f ns/flow, R^2 %.3f; M=4 T=%d episode %.4f s (objective %.1f)",
               times.c_str(), beta(1) * 1e9, r2, big.horizon, run_secs, ep.objective()));
}

void mobility_checks() {
    const auto grid = build_grid_mobility(4, 4, 0.6);
    double worst_row = 0.0;
    for (LocationId from = 0; from < 16; ++from) {
        const int x = from % 4;
        const int y = from / 4;
        int neighbours = 0;
        for (LocationId to = 0; to < 16; ++to) {
            const int d = std::abs(to % 4 - x) + std::abs(to / 4 - y);
            neighbours += d == 1 ? 1 : 0;
        }
        const double move = neighbours == 4 ? 0.1 : neighbours == 3 ? 0.4 / 3.0 : 0.2;
        for (LocationId to = 0; to < 16; ++to) {
            const int d = std::abs(to % 4 - x) + std::abs(to / 4 - y);
            const double want = d == 0 ? 0.6 : d == 1 ? move : 0.0;
            worst_row = std::max(worst_row, std::abs(grid.probability(from, to) - want));
        }
    }

    const auto small = build_grid_mobility(2, 2, 0.6);
    Eigen::MatrixXd a(5, 4);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) a(i, j) = small.probability(j, i) - (i == j ? 1.0 : 0.0);
        a(4, i) = 1.0;
    }
    rhs(4) = 1.0;
    const Eigen::VectorXd pi = a.colPivHouseholderQr().solve(rhs);

    Rng rng(2024);
    const int steps = 400000;
    std::vector<int> visits(4, 0);
    LocationId at = 0;
    for (int k = 0; k < steps; ++k) {
        at = next_location(small, at, rng);
        ++visits[static_cast<std::size_t>(at)];
    }
    double worst_freq = 0.0;
    for (int i = 0; i < 4; ++i) {
        worst_freq = std::max(worst_freq, std::abs(static_cast<double>(visits[static_cast<std::size_t>(i)]) / steps - pi(i)));
    }
    report(10, worst_row <= 1e-12 && worst_freq <= 0.01,
           fmt("4x4 rows max deviation %.2g; 2x2 visit frequencies vs stationary max deviation %.4f over %d steps",
               worst_row, worst_freq, steps));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> checks{
        oracle_optimality, policy_dominance, energy_vs_theta, ap_trends,   curve_fit,
        curve_dominance,   monte_carlo_consistency, determinism, heuristic_complexity, mobility_checks};
    for (std::size_t k = 0; k < checks.size(); ++k) {
        try {
            checks[k]();
        } catch (const std::exception& e) {
            report(static_cast<int>(k + 1), false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
