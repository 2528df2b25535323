#include "zipfsketch/report_io.h"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "zipfsketch/errors.h"

namespace zipfsketch {

namespace {

constexpr const char* kHeader =
    "algorithm,k,B,B_h,width,alpha,metric_mode,trials,mean_err,std_err,ci95,overflow_events,"
    "oracle";
constexpr std::size_t kFieldCount = 13;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DataError("report csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

unsigned long long to_uint(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno != 0 || s.front() == '-') {
    throw DataError("report csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return v;
}

void finish_row(ReportRow& row) { row.std_defined = row.trials > 1; }

}  // namespace

std::string format_float(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double quantize9(double value) { return std::strtod(format_float(value).c_str(), nullptr); }

void write_report_csv(const ErrorReport& report, std::ostream& out) {
  for (const auto& [key, value] : report.metadata) out << "# " << key << '=' << value << '\n';
  out << kHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << to_string(r.algorithm) << ',' << r.rows << ',' << r.budget << ',' << r.heavy_slots
        << ',' << r.width << ',' << format_float(r.alpha) << ',' << to_string(r.metric) << ','
        << r.trials << ',' << format_float(r.mean_err) << ',' << format_float(r.std_err) << ','
        << format_float(r.ci95) << ',' << r.overflow_events << ',' << r.oracle << '\n';
  }
}

ErrorReport read_report_csv(std::istream& in) {
  ErrorReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      const std::string body = line.substr(line.starts_with("# ") ? 2 : 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw DataError("report csv line " + std::to_string(line_no) + ": metadata without '='");
      }
      report.metadata[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) {
        throw DataError("report csv line " + std::to_string(line_no) + ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != kFieldCount) {
      throw DataError("report csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(kFieldCount) + " fields, got " + std::to_string(f.size()));
    }
    ReportRow r;
    try {
      r.algorithm = parse_algorithm(f[0]);
      r.metric = parse_error_metric(f[6]);
    } catch (const std::invalid_argument& e) {
      throw DataError("report csv line " + std::to_string(line_no) + ": " + e.what());
    }
    r.rows = static_cast<std::uint32_t>(to_uint(f[1], line_no));
    r.budget = to_uint(f[2], line_no);
    r.heavy_slots = to_uint(f[3], line_no);
    r.width = static_cast<std::uint32_t>(to_uint(f[4], line_no));
    r.alpha = to_double(f[5], line_no);
    r.trials = to_uint(f[7], line_no);
    r.mean_err = to_double(f[8], line_no);
    r.std_err = to_double(f[9], line_no);
    r.ci95 = to_double(f[10], line_no);
    r.overflow_events = to_uint(f[11], line_no);
    r.oracle = f[12];
    finish_row(r);
    report.rows.push_back(std::move(r));
  }
  if (!header_seen) throw DataError("report csv: missing header row");
  return report;
}

std::string report_to_json(const ErrorReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metadata) doc["metadata"][key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::ordered_json j;
    j["algorithm"] = std::string(to_string(r.algorithm));
    j["k"] = r.rows;
    j["B"] = r.budget;
    j["B_h"] = r.heavy_slots;
    j["width"] = r.width;
    j["alpha"] = quantize9(r.alpha);
    j["metric_mode"] = std::string(to_string(r.metric));
    j["trials"] = r.trials;
    j["mean_err"] = quantize9(r.mean_err);
    j["std_err"] = quantize9(r.std_err);
    j["ci95"] = quantize9(r.ci95);
    j["overflow_events"] = r.overflow_events;
    j["oracle"] = r.oracle;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(indent) + "\n";
}

ErrorReport report_from_json(const std::string& text) {
  ErrorReport report;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& [key, value] : doc.at("metadata").items()) {
      report.metadata[key] = value.get<std::string>();
    }
    for (const auto& j : doc.at("rows")) {
      ReportRow r;
      r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
      r.rows = j.at("k").get<std::uint32_t>();
      r.budget = j.at("B").get<std::size_t>();
      r.heavy_slots = j.at("B_h").get<std::size_t>();
      r.width = j.at("width").get<std::uint32_t>();
      r.alpha = j.at("alpha").get<double>();
      r.metric = parse_error_metric(j.at("metric_mode").get<std::string>());
      r.trials = j.at("trials").get<std::size_t>();
      r.mean_err = j.at("mean_err").get<double>();
      r.std_err = j.at("std_err").get<double>();
      r.ci95 = j.at("ci95").get<double>();
      r.overflow_events = j.at("overflow_events").get<std::size_t>();
      r.oracle = j.at("oracle").get<std::string>();
      finish_row(r);
      report.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("report json: ") + e.what());
  }
  return report;
}

void write_table_csv(const TableReproduction& table, std::ostream& out) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << '=' << value << '\n';
  out << "B";
  for (const std::string_view label : kTableColumns) out << ',' << label;
  out << '\n';
  for (std::size_t b = 0; b < table.budgets.size(); ++b) {
    out << table.budgets[b];
    for (const ErrorReport& col : table.columns) out << ',' << format_float(col.rows.at(b).mean_err);
    out << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace zipfsketch
