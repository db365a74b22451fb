#include "offload/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "offload/dp.hpp"
#include "offload/energy_curve.hpp"
#include "offload/errors.hpp"
#include "offload/heuristic.hpp"
#include "offload/oracle.hpp"
#include "offload/policy_io.hpp"
#include "offload/report.hpp"

namespace offload {

namespace {

std::vector<std::string> default_policies(const Scenario& sc) {
    std::vector<std::string> p{"dp", "heuristic", "baseline"};
    if (sc.flow_count() == 1) p.push_back("price_only");
    return p;
}

HeuristicParams heuristic_params(const ScenarioConfig& c, const Scenario& sc) {
    return default_heuristic_params(sc, c.deadline_threshold, c.wlan_speed_threshold);
}

std::vector<AggregateReport> evaluate(const ScenarioConfig& config, const Scenario& sc,
                                      const RunSettings& settings,
                                      std::shared_ptr<const PolicyTable> dp_table) {
    MonteCarloOptions mc;
    mc.episodes = config.episodes;
    mc.base_seed = config.seed;
    mc.start_location = config.start_location;
    mc.threads = settings.threads;

    SolveOptions so;
    so.action_mode = config.action_mode;
    so.threads = settings.threads;

    std::vector<AggregateReport> out;
    const auto policies = settings.policies.empty() ? default_policies(sc) : settings.policies;
    for (const auto& name : policies) {
        Policy policy;
        if (name == "dp") {
            if (!dp_table) dp_table = std::make_shared<const PolicyTable>(backward_induction(sc, so).policy);
            policy = make_table_policy(dp_table, "dp");
        } else if (name == "heuristic") {
            policy = make_heuristic_policy(sc, heuristic_params(config, sc));
        } else if (name == "baseline") {
            policy = make_baseline_policy(sc);
        } else if (name == "price_only") {
            auto table = std::make_shared<const PolicyTable>(price_only_policy(sc, so).policy);
            policy = make_table_policy(table, "price_only");
        } else {
            throw ConfigError("unknown policy '" + name +
                              "' (expected dp, heuristic, baseline or price_only)");
        }
        auto report = monte_carlo(sc, policy, mc);
        report.scenario_id = config.name + "-" + fingerprint_hex(report.fingerprint).substr(0, 8);
        out.push_back(std::move(report));
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ConfigError("sweep value '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--values needs at least one value");
    return out;
}

std::vector<EnergySample> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read sample file '" + path + "'");
    std::vector<EnergySample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("no comma");
            samples.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            if (samples.empty() && lineno == 1) continue;  // header row
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'throughput,joule_per_mbit'");
        }
    }
    return samples;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + path + "' failed");
}

void emit(const std::vector<AggregateReport>& reports, const std::string& format,
          const std::string& path, std::ostream& out) {
    std::ostringstream ss;
    if (parse_report_format(format) == ReportFormat::Csv) write_csv(ss, reports);
    else write_json(ss, reports);
    write_text(path, ss.str(), out);
}

}  // namespace

std::vector<AggregateReport> evaluate_policies(const ScenarioConfig& config,
                                               const RunSettings& settings) {
    const Scenario sc = build_scenario(config);
    return evaluate(config, sc, settings, nullptr);
}

SweepAxis parse_sweep_axis(const std::string& text) {
    if (text == "theta") return SweepAxis::Theta;
    if (text == "flows") return SweepAxis::Flows;
    if (text == "aps") return SweepAxis::Aps;
    if (text == "deadline") return SweepAxis::Deadline;
    throw ConfigError("unknown sweep axis '" + text + "' (expected theta, flows, aps or deadline)");
}

ScenarioConfig apply_sweep_level(ScenarioConfig config, SweepAxis axis, double value) {
    auto whole = [&](const char* what) {
        if (value < 0.0 || value != std::floor(value)) {
            throw ConfigError(std::string(what) + " level must be a non-negative integer");
        }
        return static_cast<long>(value);
    };
    switch (axis) {
        case SweepAxis::Theta:
            config.theta = value;
            break;
        case SweepAxis::Flows: {
            const long n = whole("flows");
            if (n < 1 || static_cast<std::size_t>(n) > config.flows.size()) {
                throw ConfigError("flows level " + std::to_string(n) + " outside 1.." +
                                  std::to_string(config.flows.size()));
            }
            config.flows.resize(static_cast<std::size_t>(n));
            break;
        }
        case SweepAxis::Aps:
            config.ap_count = static_cast<int>(whole("aps"));
            break;
        case SweepAxis::Deadline: {
            const long last = whole("deadline");
            if (last < 1) throw ConfigError("deadline level must be >= 1");
            Epoch old_last = 1;
            for (const auto& f : config.flows) old_last = std::max(old_last, f.deadline);
            for (auto& f : config.flows) {
                f.deadline = std::max<Epoch>(
                    1, static_cast<Epoch>(std::llround(static_cast<double>(f.deadline) * last / old_last)));
            }
            break;
        }
    }
    config.validate();
    return config;
}

std::vector<AggregateReport> run_sweep(const ScenarioConfig& config, SweepAxis axis,
                                       const std::vector<double>& values,
                                       const RunSettings& settings) {
    std::vector<AggregateReport> all;
    for (double v : values) {
        auto level = evaluate_policies(apply_sweep_level(config, axis, v), settings);
        all.insert(all.end(), level.begin(), level.end());
    }
    return all;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mobile data offloading: exact DP, heuristic and Monte Carlo evaluation", "offload"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> episodes;
    std::string out_path;
    std::string action_mode;
    unsigned threads = 1;
    app.add_option("--seed", seed, "Base seed (overrides the config)");
    app.add_option("--episodes", episodes, "Monte Carlo episodes (overrides the config)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "Output file ('-' for stdout)");
    app.add_option("--action-mode", action_mode, "auto, exhaustive or edf")
        ->check(CLI::IsMember({"auto", "exhaustive", "edf"}));
    app.add_option("--threads", threads, "Worker threads for solving and simulation")
        ->check(CLI::PositiveNumber);

    std::string config_path;
    std::string policy_path;
    std::string policies;
    std::string format = "csv";
    std::string axis;
    std::string values;
    std::string samples_path;
    std::string preset_name;
    std::size_t instances = 25;

    auto* solve = app.add_subcommand("solve", "Solve the DP and write the policy table");
    solve->add_option("--config", config_path, "Scenario config (JSON)")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of policies");
    simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
    simulate->add_option("--policy", policy_path, "Policy table from `solve` (otherwise solved here)");
    simulate->add_option("--policies", policies, "Comma list of dp,heuristic,baseline,price_only");
    simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("sweep", "Vary one scenario parameter and evaluate all policies");
    sweep->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sweep->add_option("--axis", axis, "theta, flows, aps or deadline")
        ->required()
        ->check(CLI::IsMember({"theta", "flows", "aps", "deadline"}));
    sweep->add_option("--values", values, "Comma-separated levels")->required();
    sweep->add_option("--policies", policies, "Comma list of dp,heuristic,baseline,price_only");
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* fit = app.add_subcommand("fit-energy", "Fit eps(x) = A exp(-d x) to throughput samples");
    fit->add_option("--samples", samples_path, "CSV lines 'throughput,joule_per_mbit'")->required();

    auto* oracle = app.add_subcommand("oracle-check", "Compare the DP with brute force on tiny instances");
    oracle->add_option("--instances", instances, "Number of instances")->check(CLI::PositiveNumber);

    auto* preset = app.add_subcommand("preset", "Print a built-in scenario config");
    preset->add_option("name", preset_name, "desk, desk-single or ap-sweep")
        ->required()
        ->check(CLI::IsMember({"desk", "desk-single", "ap-sweep"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "offload: " << e.what() << "\n" << "Run with --help for usage.\n";
        return 2;
    }

    try {
        auto load = [&] {
            ScenarioConfig c = load_config(config_path);
            if (seed) c.seed = *seed;
            if (episodes) c.episodes = *episodes;
            if (!action_mode.empty()) c.action_mode = parse_action_mode(action_mode);
            return c;
        };
        RunSettings settings;
        settings.policies = split_list(policies);
        settings.threads = threads;

        if (*solve) {
            const ScenarioConfig c = load();
            const Scenario sc = build_scenario(c);
            SolveOptions so;
            so.action_mode = c.action_mode;
            so.threads = threads;
            const Solution sol = backward_induction(sc, so);
            const std::string path = !out_path.empty() ? out_path
                                     : !c.policy_path.empty() ? c.policy_path
                                                              : "policy.bin";
            save_policy(sol.policy, path);
            err << "solved " << sol.stats.states_per_epoch << " states x " << sc.horizon
                << " slots (" << to_string(sol.policy.mode()) << ") in " << sol.stats.seconds
                << " s; V1 averaged over start cells = " << uniform_start_value(sc, sol.values)
                << "; wrote " << path << "\n";
        } else if (*simulate) {
            const ScenarioConfig c = load();
            const Scenario sc = build_scenario(c);
            std::shared_ptr<const PolicyTable> table;
            if (!policy_path.empty()) {
                auto loaded = std::make_shared<const PolicyTable>(load_policy(policy_path));
                if (loaded->fingerprint() != scenario_fingerprint(sc)) {
                    throw ConfigError("policy table " + policy_path +
                                      " was solved for a different scenario (fingerprint mismatch)");
                }
                table = std::move(loaded);
            }
            const auto reports = evaluate(c, sc, settings, table);
            emit(reports, format, out_path.empty() ? c.report_path : out_path, out);
        } else if (*sweep) {
            const ScenarioConfig c = load();
            const auto reports = run_sweep(c, parse_sweep_axis(axis), parse_values(values), settings);
            emit(reports, format, out_path.empty() ? c.report_path : out_path, out);
        } else if (*fit) {
            const auto samples = read_samples(samples_path);
            const auto f = fit_energy_curve(samples);
            nlohmann::json j = {{"amplitude", f.curve.amplitude},
                                {"decay", f.curve.decay},
                                {"log_residual", f.residual},
                                {"samples", samples.size()}};
            write_text(out_path, j.dump(2) + "\n", out);
        } else if (*oracle) {
            const std::uint64_t base = seed.value_or(0);
            std::size_t checked = 0;
            std::size_t failed = 0;
            std::ostringstream log;
            for (std::uint64_t i = 0; checked < instances && i < 100 * instances; ++i) {
                Rng rng(derive_seed(base, i));
                const Scenario sc = random_tiny_scenario(rng);
                const auto start = static_cast<LocationId>(rng.below(static_cast<std::uint64_t>(sc.location_count())));
                double brute = 0.0;
                try {
                    brute = brute_force_value(sc, start);
                } catch (const SizingError&) {
                    continue;
                }
                SolveOptions so;
                so.action_mode = ActionMode::Exhaustive;
                const double dp = start_value(sc, backward_induction(sc, so).values, start);
                const bool ok = std::abs(dp - brute) <= 1e-9 * std::max(1.0, std::abs(brute));
                ++checked;
                failed += ok ? 0 : 1;
                char line[160];
                std::snprintf(line, sizeof line, "instance %3zu  L=%d T=%d M=%zu  dp=%.12g  brute=%.12g  %s\n",
                              checked, sc.location_count(), sc.horizon, sc.flow_count(), dp, brute,
                              ok ? "ok" : "MISMATCH");
                log << line;
            }
            log << checked << " instances, " << failed << " mismatches\n";
            write_text(out_path, log.str(), out);
            if (checked < instances) {
                err << "offload: only " << checked << " instances fit the brute-force budget\n";
                return 1;
            }
            return failed == 0 ? 0 : 1;
        } else if (*preset) {
            ScenarioConfig c = preset_name == "desk"          ? desk_preset()
                               : preset_name == "desk-single" ? single_flow_desk_preset()
                                                              : ap_sweep_preset();
            if (seed) c.seed = *seed;
            if (episodes) c.episodes = *episodes;
            write_text(out_path, emit_config(c), out);
        }
    } catch (const std::exception& e) {
        err << "offload: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace offload
