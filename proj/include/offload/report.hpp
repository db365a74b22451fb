#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "offload/sim.hpp"

namespace offload {

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(const std::string& text);

/// CSV header, in column order.
extern const char* const kCsvHeader;

/// One header line plus one row per report. Numbers use 6 significant
/// digits; every line ends in '\n'.
void write_csv(std::ostream& out, const std::vector<AggregateReport>& reports);
/// JSON array of report objects at full double precision.
void write_json(std::ostream& out, const std::vector<AggregateReport>& reports);

/// Writes to `path`, or to stdout when path is empty or "-". Throws IoError
/// if the file cannot be written.
void emit_report(const std::vector<AggregateReport>& reports, ReportFormat format,
                 const std::string& path);

}  // namespace offload
