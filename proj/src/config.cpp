#include "offload/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "offload/errors.hpp"
#include "offload/truncated_normal.hpp"

namespace offload {

using nlohmann::json;

void ScenarioConfig::validate() const {
    if (schema_version != kSchemaVersion) {
        throw ConfigError("unsupported schema_version " + std::to_string(schema_version) +
                          " (expected " + std::to_string(kSchemaVersion) + ")");
    }
    if (grid_width < 1 || grid_height < 1) throw ConfigError("grid must be at least 1x1");
    if (!(stay_prob >= 0.0 && stay_prob <= 1.0)) throw ConfigError("stay_prob must lie in [0, 1]");
    const int cells = grid_width * grid_height;
    if (ap_count < 0 || ap_count > cells) {
        throw ConfigError("ap_count " + std::to_string(ap_count) + " outside [0, " +
                          std::to_string(cells) + "]");
    }
    for (const auto* d : {&wlan, &cellular}) {
        const char* which = d == &wlan ? "wlan" : "cellular";
        if (!(d->stddev > 0.0)) throw ConfigError(std::string(which) + ".stddev must be positive");
        if (!(d->lo < d->hi)) throw ConfigError(std::string(which) + " bounds must satisfy lo < hi");
        if (d->lo < 0.0) throw ConfigError(std::string(which) + ".lo must be non-negative");
    }
    if (!(energy_curve.amplitude > 0.0) || !(energy_curve.decay > 0.0)) {
        throw ConfigError("energy curve needs amplitude > 0 and decay > 0");
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(slot_seconds > 0.0)) throw ConfigError("slot_seconds must be positive");
    if (flows.empty()) throw ConfigError("at least one flow is required");
    for (std::size_t j = 0; j < flows.size(); ++j) {
        const auto& f = flows[j];
        const std::string where = "flow " + std::to_string(j) + ": ";
        if (!(f.size_mbit >= 0.0)) throw ConfigError(where + "size must be non-negative");
        const double q = f.size_mbit / sigma;
        if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) {
            throw ConfigError(where + "size " + std::to_string(f.size_mbit) +
                              " Mbit is not a multiple of sigma " + std::to_string(sigma));
        }
        if (q > 65535.0) throw ConfigError(where + "more than 65535 sigma steps");
        if (f.deadline < 1) throw ConfigError(where + "deadline must be >= 1");
    }
    if (price_per_mbit < 0.0 || theta < 0.0 || penalty_coefficient < 0.0) {
        throw ConfigError("cost parameters must be non-negative");
    }
    for (double th : theta_schedule) {
        if (th < 0.0) throw ConfigError("theta_schedule entries must be non-negative");
    }
    if (deadline_threshold && *deadline_threshold < 0.0) {
        throw ConfigError("deadline_threshold must be non-negative");
    }
    if (wlan_speed_threshold && *wlan_speed_threshold < 0.0) {
        throw ConfigError("wlan_speed_threshold must be non-negative");
    }
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (start_location && (*start_location < 0 || *start_location >= cells)) {
        throw ConfigError("start_location outside the grid");
    }
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + where + it.key() + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

ThroughputDist read_dist(const json& j, ThroughputDist d, const std::string& where) {
    reject_unknown(j, {"mean", "stddev", "lo", "hi"}, where);
    read(j, "mean", d.mean);
    read(j, "stddev", d.stddev);
    read(j, "lo", d.lo);
    read(j, "hi", d.hi);
    return d;
}

json dist_json(const ThroughputDist& d) {
    return {{"mean", d.mean}, {"stddev", d.stddev}, {"lo", d.lo}, {"hi", d.hi}};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ScenarioConfig c;
    try {
        reject_unknown(j,
                       {"schema_version", "name", "grid", "ap_count", "wlan", "cellular",
                        "energy_curve", "sigma_mbit", "slot_seconds", "flows", "costs", "heuristic",
                        "simulation", "output"},
                       "");
        if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
        read(j, "schema_version", c.schema_version);
        read(j, "name", c.name);
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            reject_unknown(g, {"width", "height", "stay_prob", "adjacency"}, "grid.");
            read(g, "width", c.grid_width);
            read(g, "height", c.grid_height);
            read(g, "stay_prob", c.stay_prob);
            if (g.contains("adjacency")) {
                const auto a = g.at("adjacency").get<std::string>();
                if (a == "von_neumann") c.adjacency = Adjacency::VonNeumann;
                else if (a == "moore") c.adjacency = Adjacency::Moore;
                else throw ConfigError("grid.adjacency must be von_neumann or moore");
            }
        }
        read(j, "ap_count", c.ap_count);
        if (j.contains("wlan")) c.wlan = read_dist(j.at("wlan"), c.wlan, "wlan.");
        if (j.contains("cellular")) c.cellular = read_dist(j.at("cellular"), c.cellular, "cellular.");
        if (j.contains("energy_curve")) {
            const auto& e = j.at("energy_curve");
            if (e.is_string()) {
                const auto name = e.get<std::string>();
                if (name == "f1") c.energy_curve = kCurveF1;
                else if (name == "f2") c.energy_curve = kCurveF2;
                else throw ConfigError("energy_curve must be f1, f2 or {amplitude, decay}");
            } else {
                reject_unknown(e, {"amplitude", "decay"}, "energy_curve.");
                read(e, "amplitude", c.energy_curve.amplitude);
                read(e, "decay", c.energy_curve.decay);
            }
        }
        read(j, "sigma_mbit", c.sigma);
        read(j, "slot_seconds", c.slot_seconds);
        if (j.contains("flows")) {
            for (const auto& f : j.at("flows")) {
                reject_unknown(f, {"size_mbit", "deadline"}, "flows[].");
                FlowConfig fc;
                read(f, "size_mbit", fc.size_mbit);
                read(f, "deadline", fc.deadline);
                c.flows.push_back(fc);
            }
        }
        if (j.contains("costs")) {
            const auto& k = j.at("costs");
            reject_unknown(k, {"price_per_mbit", "theta", "penalty_coefficient", "theta_schedule"},
                           "costs.");
            read(k, "price_per_mbit", c.price_per_mbit);
            read(k, "theta", c.theta);
            read(k, "penalty_coefficient", c.penalty_coefficient);
            read(k, "theta_schedule", c.theta_schedule);
        }
        if (j.contains("heuristic")) {
            const auto& h = j.at("heuristic");
            reject_unknown(h, {"deadline_threshold", "wlan_speed_threshold"}, "heuristic.");
            read_optional(h, "deadline_threshold", c.deadline_threshold);
            read_optional(h, "wlan_speed_threshold", c.wlan_speed_threshold);
        }
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            reject_unknown(s, {"episodes", "seed", "start_location", "action_mode"}, "simulation.");
            read(s, "episodes", c.episodes);
            read(s, "seed", c.seed);
            read_optional(s, "start_location", c.start_location);
            if (s.contains("action_mode")) {
                c.action_mode = parse_action_mode(s.at("action_mode").get<std::string>());
            }
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            reject_unknown(o, {"policy", "report"}, "output.");
            read(o, "policy", c.policy_path);
            read(o, "report", c.report_path);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

std::string emit_config(const ScenarioConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["grid"] = {{"width", c.grid_width},
                 {"height", c.grid_height},
                 {"stay_prob", c.stay_prob},
                 {"adjacency", c.adjacency == Adjacency::Moore ? "moore" : "von_neumann"}};
    j["ap_count"] = c.ap_count;
    j["wlan"] = dist_json(c.wlan);
    j["cellular"] = dist_json(c.cellular);
    j["energy_curve"] = {{"amplitude", c.energy_curve.amplitude}, {"decay", c.energy_curve.decay}};
    j["sigma_mbit"] = c.sigma;
    j["slot_seconds"] = c.slot_seconds;
    j["flows"] = json::array();
    for (const auto& f : c.flows) j["flows"].push_back({{"size_mbit", f.size_mbit}, {"deadline", f.deadline}});
    j["costs"] = {{"price_per_mbit", c.price_per_mbit},
                  {"theta", c.theta},
                  {"penalty_coefficient", c.penalty_coefficient},
                  {"theta_schedule", c.theta_schedule}};
    j["heuristic"] = {{"deadline_threshold", optional_json(c.deadline_threshold)},
                      {"wlan_speed_threshold", optional_json(c.wlan_speed_threshold)}};
    j["simulation"] = {{"episodes", c.episodes},
                       {"seed", c.seed},
                       {"start_location", optional_json(c.start_location)},
                       {"action_mode", to_string(c.action_mode)}};
    j["output"] = {{"policy", c.policy_path}, {"report", c.report_path}};
    return j.dump(2) + "\n";
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Scenario generate_scenario(const ScenarioConfig& config, Rng& rng) {
    config.validate();
    const int cells = config.grid_width * config.grid_height;

    std::vector<int> order(static_cast<std::size_t>(cells));
    std::iota(order.begin(), order.end(), 0);
    for (int i = cells - 1; i > 0; --i) {
        const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(k)]);
    }
    std::vector<bool> has_ap(static_cast<std::size_t>(cells), false);
    for (int i = 0; i < config.ap_count; ++i) has_ap[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

    auto quantize = [&](double mbps) {
        return std::max<Quanta>(1, static_cast<Quanta>(std::llround(mbps * config.slot_seconds / config.sigma)));
    };

    Scenario sc;
    sc.grid_width = config.grid_width;
    sc.grid_height = config.grid_height;
    for (int l = 0; l < cells; ++l) {
        const auto& cd = config.cellular;
        const auto& wd = config.wlan;
        const double cell_mbps = truncated_normal_sample(cd.mean, cd.stddev, cd.lo, cd.hi, rng);
        const double wlan_mbps = truncated_normal_sample(wd.mean, wd.stddev, wd.lo, wd.hi, rng);
        LocationProfile p;
        p.id = l;
        p.cellular_throughput = cell_mbps;
        p.cellular_rate = quantize(cell_mbps);
        p.cellular_energy = config.energy_curve(cell_mbps);
        if (has_ap[static_cast<std::size_t>(l)]) {
            p.wlan_available = true;
            p.wlan_throughput = wlan_mbps;
            p.wlan_rate = quantize(wlan_mbps);
            p.wlan_energy = config.energy_curve(wlan_mbps);
        }
        sc.locations.push_back(p);
    }
    sc.mobility = build_grid_mobility(config.grid_width, config.grid_height, config.stay_prob,
                                      config.adjacency);

    for (std::size_t j = 0; j < config.flows.size(); ++j) {
        const auto& f = config.flows[j];
        sc.flows.push_back({static_cast<int>(j),
                            static_cast<Quanta>(std::llround(f.size_mbit / config.sigma)), f.deadline});
    }
    std::stable_sort(sc.flows.begin(), sc.flows.end(),
                     [](const FlowSpec& a, const FlowSpec& b) { return a.deadline < b.deadline; });
    sc.horizon = sc.flows.back().deadline;
    sc.costs.price_per_mbit = config.price_per_mbit;
    sc.costs.energy_preference = config.theta;
    sc.costs.penalty_coefficient = config.penalty_coefficient;
    sc.costs.theta_schedule = config.theta_schedule;
    sc.sigma = config.sigma;
    sc.slot_seconds = config.slot_seconds;
    sc.rng_seed = config.seed;
    sc.validate();
    return sc;
}

Rng scenario_rng(std::uint64_t seed) { return Rng(mix64(seed ^ 0x5343454E4152494FULL)); }

Scenario build_scenario(const ScenarioConfig& config) {
    Rng rng = scenario_rng(config.seed);
    return generate_scenario(config, rng);
}

ScenarioConfig desk_preset() {
    ScenarioConfig c;
    c.name = "desk";
    c.theta = 2.0;
    c.flows = {{500.0, 140}, {550.0, 280}};
    return c;
}

ScenarioConfig single_flow_desk_preset() {
    ScenarioConfig c = desk_preset();
    c.name = "desk-single";
    c.flows.resize(1);
    return c;
}

ScenarioConfig ap_sweep_preset() {
    ScenarioConfig c;
    c.name = "ap-sweep";
    c.theta = 1.0;
    c.sigma = 5.0;
    c.flows = {{200.0, 20}};
    return c;
}

Scenario random_tiny_scenario(Rng& rng) {
    static constexpr int kShapes[3][2] = {{1, 1}, {2, 1}, {2, 2}};
    const auto& shape = kShapes[rng.below(3)];
    const int w = shape[0];
    const int h = shape[1];
    const int cells = w * h;

    std::vector<double> matrix(static_cast<std::size_t>(cells * cells), 0.0);
    for (int from = 0; from < cells; ++from) {
        double sum = 0.0;
        for (int to = 0; to < cells; ++to) {
            // Roughly a third of the off-diagonal entries are structurally zero.
            const double v = (to != from && rng.below(3) == 0) ? 0.0 : 0.05 + rng.uniform();
            matrix[static_cast<std::size_t>(from * cells + to)] = v;
            sum += v;
        }
        for (int to = 0; to < cells; ++to) matrix[static_cast<std::size_t>(from * cells + to)] /= sum;
    }

    Scenario sc;
    sc.grid_width = w;
    sc.grid_height = h;
    sc.mobility = MobilityModel(w, h, std::move(matrix));
    sc.sigma = static_cast<double>(1 + rng.below(25));
    for (int l = 0; l < cells; ++l) {
        LocationProfile p;
        p.id = l;
        p.cellular_rate = static_cast<Quanta>(1 + rng.below(3));
        p.cellular_throughput = 5.0 + 10.0 * rng.uniform();
        p.cellular_energy = kCurveF1(p.cellular_throughput);
        if (rng.below(2) == 0) {
            p.wlan_available = true;
            p.wlan_rate = static_cast<Quanta>(1 + rng.below(3));
            p.wlan_throughput = 9.0 + 12.0 * rng.uniform();
            p.wlan_energy = kCurveF1(p.wlan_throughput);
        }
        sc.locations.push_back(p);
    }
    const std::size_t m = 1 + rng.below(2);
    for (std::size_t j = 0; j < m; ++j) {
        sc.flows.push_back({static_cast<int>(j), static_cast<Quanta>(rng.below(5)),
                            static_cast<Epoch>(1 + rng.below(4))});
    }
    std::stable_sort(sc.flows.begin(), sc.flows.end(),
                     [](const FlowSpec& a, const FlowSpec& b) { return a.deadline < b.deadline; });
    sc.horizon = sc.flows.back().deadline;
    static constexpr double kThetas[4] = {0.0, 0.5, 1.0, 2.0};
    sc.costs.energy_preference = kThetas[rng.below(4)];
    sc.validate();
    return sc;
}

}  // namespace offload
