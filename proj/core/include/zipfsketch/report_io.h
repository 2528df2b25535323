#pragma once

#include <iosfwd>
#include <string>

#include "zipfsketch/experiments.h"

namespace zipfsketch {

/// Report CSV: `# key=value` metadata lines, then a header row
///   algorithm,k,B,B_h,width,alpha,metric_mode,trials,mean_err,std_err,ci95,
///   overflow_events,oracle
/// and one row per (configuration, budget). Floats carry 9 significant digits.
void write_report_csv(const ErrorReport& report, std::ostream& out);

/// Inverse of write_report_csv. Throws DataError on malformed input.
ErrorReport read_report_csv(std::istream& in);

/// {"metadata": {...}, "rows": [{<same field names as the CSV>}, ...]}
std::string report_to_json(const ErrorReport& report, int indent = 2);
ErrorReport report_from_json(const std::string& text);

/// Wide table: B followed by one mean-error column per label in
/// kTableColumns.
void write_table_csv(const TableReproduction& table, std::ostream& out);

/// %.9g
std::string format_float(double value);

/// Rounds to the value that format_float would print.
double quantize9(double value);

/// Writes `content` to `path`; throws std::runtime_error naming the path on
/// failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace zipfsketch
