#include "offload/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "offload/errors.hpp"

namespace offload {

const char* const kCsvHeader =
    "scenario_id,policy,theta,n_flows,n_aps,episodes,mean_monetary_yen,sd_monetary,"
    "mean_energy_joule,sd_energy,mean_objective,finish_rate,seed";

ReportFormat parse_report_format(const std::string& text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "json") return ReportFormat::Json;
    throw ConfigError("unknown report format '" + text + "' (expected csv or json)");
}

namespace {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<AggregateReport>& reports) {
    out << kCsvHeader << '\n';
    for (const auto& r : reports) {
        out << r.scenario_id << ',' << r.policy << ',' << g6(r.theta) << ',' << r.n_flows << ','
            << r.n_aps << ',' << r.episodes << ',' << g6(r.mean_monetary) << ','
            << g6(r.sd_monetary) << ',' << g6(r.mean_energy) << ',' << g6(r.sd_energy) << ','
            << g6(r.mean_objective) << ',' << g6(r.finish_rate) << ',' << r.seed << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<AggregateReport>& reports) {
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"scenario_id", r.scenario_id},
                       {"policy", r.policy},
                       {"theta", r.theta},
                       {"n_flows", r.n_flows},
                       {"n_aps", r.n_aps},
                       {"episodes", r.episodes},
                       {"mean_monetary_yen", r.mean_monetary},
                       {"sd_monetary", r.sd_monetary},
                       {"mean_energy_joule", r.mean_energy},
                       {"sd_energy", r.sd_energy},
                       {"mean_objective", r.mean_objective},
                       {"sd_objective", r.sd_objective},
                       {"finish_rate", r.finish_rate},
                       {"seed", r.seed}});
    }
    out << arr.dump(2) << '\n';
}

void emit_report(const std::vector<AggregateReport>& reports, ReportFormat format,
                 const std::string& path) {
    auto write = [&](std::ostream& os) {
        if (format == ReportFormat::Csv) write_csv(os, reports);
        else write_json(os, reports);
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace offload
