#include "cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zipfsketch/anchor_check.h"
#include "zipfsketch/errors.h"
#include "zipfsketch/experiments.h"
#include "zipfsketch/freq_model.h"
#include "zipfsketch/report_io.h"
#include "zipfsketch/scaling_fit.h"
#include "zipfsketch/svg_plot.h"

namespace zipfsketch::cli {

namespace {

constexpr double kAnchorSigmas = 3.0;

struct Options {
  std::size_t n = 10'000;
  double alpha = 1.0;
  std::uint32_t k = 1;
  std::string budgets;
  std::size_t trials = 0;  // 0: subcommand default
  std::uint64_t seed = 42;
  std::string oracle = "perfect";
  std::optional<std::size_t> bh;
  std::uint32_t heavy_cost = 2;
  std::string metric = "raw";
  std::string format = "csv";
  std::string out;
  unsigned threads = 0;

  std::string algorithm = "CM";
  std::string in;
  std::string predictor = "none";
  std::size_t table_size = 100;
  std::string constants = "20";
  std::string deltas = "0,0.1,0.5,1";
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  if (pos != s.size() || s.front() == '-') throw std::invalid_argument("not an integer: '" + s + "'");
  return static_cast<std::size_t>(v);
}

void emit(const Options& opt, const std::string& content, std::ostream& out) {
  if (opt.out.empty()) {
    out << content;
  } else {
    write_file(opt.out, content);
  }
}

std::string metadata_block(const std::map<std::string, std::string>& meta) {
  std::string s;
  for (const auto& [k, v] : meta) s += "# " + k + "=" + v + "\n";
  return s;
}

void add_common(CLI::App* cmd, Options& opt, bool with_k, bool with_oracle) {
  cmd->add_option("--n", opt.n, "number of distinct items")->capture_default_str();
  cmd->add_option("--alpha", opt.alpha, "Zipf exponent")->capture_default_str();
  if (with_k) cmd->add_option("--k", opt.k, "rows (hash functions)")->capture_default_str();
  cmd->add_option("--budgets", opt.budgets, "total buckets: comma list or a:b:step");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials");
  cmd->add_option("--seed", opt.seed, "base seed; trial t uses seed+t")->capture_default_str();
  if (with_oracle) {
    cmd->add_option("--oracle", opt.oracle, "perfect | noisy:<delta> | lookup:<S>:<T>")
        ->capture_default_str();
    cmd->add_option("--bh", opt.bh, "heavy slots B_h (default round(B/10))");
  }
  cmd->add_option("--heavy-cost", opt.heavy_cost, "buckets charged per heavy slot")
      ->capture_default_str();
  cmd->add_option("--metric", opt.metric, "raw | normalized")
      ->check(CLI::IsMember({"raw", "normalized"}))
      ->capture_default_str();
  cmd->add_option("--format", opt.format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "output path (default stdout)");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
}

ExperimentConfig sweep_config(const Options& opt) {
  ExperimentConfig c;
  c.n = opt.n;
  c.alpha = opt.alpha;
  c.algorithm = parse_algorithm(opt.algorithm);
  c.rows = opt.k;
  c.budgets = parse_budgets(opt.budgets.empty() ? "1000:5000:200" : opt.budgets);
  c.oracle = parse_oracle(opt.oracle);
  c.heavy_override = opt.bh;
  c.heavy_bucket_cost = opt.heavy_cost;
  c.trials = opt.trials ? opt.trials : 20;
  c.base_seed = opt.seed;
  c.metric = parse_error_metric(opt.metric);
  c.validate();
  return c;
}

void write_report(const Options& opt, const ErrorReport& report, const std::string& title,
                  std::ostream& out) {
  if (opt.format == "json") {
    emit(opt, report_to_json(report), out);
  } else if (opt.format == "svg") {
    SvgOptions svg;
    svg.title = title;
    svg.log_y = true;
    emit(opt, report_svg(report, svg), out);
  } else {
    std::ostringstream s;
    write_report_csv(report, s);
    emit(opt, s.str(), out);
  }
}

int cmd_gen_zipf(const Options& opt, std::ostream& out) {
  const FrequencyVector f = zipf_frequencies(opt.n, opt.alpha);
  std::string body;
  if (opt.format == "json") {
    body = "{\"n\":" + std::to_string(opt.n) + ",\"alpha\":" + format_float(opt.alpha) +
           ",\"weights\":[";
    for (std::size_t i = 0; i < f.size(); ++i) body += (i ? "," : "") + format_float(f.weights()[i]);
    body += "]}\n";
  } else {
    if (!opt.out.empty()) {
      body = metadata_block({{"n", std::to_string(opt.n)}, {"alpha", format_float(opt.alpha)}});
    }
    for (std::size_t i = 0; i < f.size(); ++i) body += (i ? "," : "") + format_float(f.weights()[i]);
    body += "\n";
  }
  emit(opt, body, out);
  return kExitOk;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const ExperimentConfig c = sweep_config(opt);
  ErrorReport report = run_sweep(c, opt.threads);
  report.metadata["command"] = "sweep";
  write_report(opt, report, std::string(to_string(c.algorithm)) + " k=" + std::to_string(c.rows),
               out);
  return kExitOk;
}

int cmd_table5(const Options& opt, std::ostream& out) {
  TableConfig c;
  c.n = opt.n;
  c.alpha = opt.alpha;
  c.budgets = opt.budgets.empty() ? default_table_budgets() : parse_budgets(opt.budgets);
  c.trials = opt.trials ? opt.trials : 20;
  c.base_seed = opt.seed;
  c.metric = parse_error_metric(opt.metric);
  c.heavy_bucket_cost = opt.heavy_cost;
  TableReproduction table = reproduce_table(c, opt.threads);
  table.metadata["command"] = "table5";
  if (opt.format == "csv") {
    std::ostringstream s;
    write_table_csv(table, s);
    emit(opt, s.str(), out);
  } else {
    write_report(opt, table.combined(), "learned vs standard sketches", out);
  }
  return kExitOk;
}

int cmd_fit(const Options& opt, std::ostream& out) {
  ErrorReport report;
  if (!opt.in.empty()) {
    std::ifstream f(opt.in);
    if (!f) throw std::runtime_error("cannot open '" + opt.in + "'");
    report = read_report_csv(f);
  } else {
    report = run_sweep(sweep_config(opt), opt.threads);
  }
  const Algorithm algorithm = parse_algorithm(opt.algorithm);
  const auto points = scaling_points(report, algorithm, opt.k);
  std::size_t n = opt.n;
  double alpha = opt.alpha;
  if (!opt.in.empty()) {
    if (auto it = report.metadata.find("n"); it != report.metadata.end()) n = to_size(it->second);
    for (const ReportRow& r : report.rows) {
      if (r.algorithm == algorithm && r.rows == opt.k) alpha = r.alpha;
    }
  }
  const Predictor predictor = make_predictor(opt.predictor, n, opt.k, alpha);
  const ScalingFit fit = fit_scaling(points, predictor);

  std::map<std::string, std::string> meta = report.metadata;
  meta["command"] = "fit";
  meta["fit_algorithm"] = std::string(to_string(algorithm));
  meta["fit_k"] = std::to_string(opt.k);
  meta["predictor"] = opt.predictor;
  if (!opt.in.empty()) meta["input"] = opt.in;

  if (opt.format == "svg") {
    SvgOptions svg;
    svg.title = std::string(to_string(algorithm)) + " k=" + std::to_string(opt.k) +
                " power-law fit";
    emit(opt, fit_svg(points, fit, svg), out);
  } else if (opt.format == "json") {
    std::string body = "{\"metadata\":{";
    bool first = true;
    for (const auto& [k, v] : meta) {
      body += std::string(first ? "" : ",") + "\"" + k + "\":\"" + v + "\"";
      first = false;
    }
    body += "},\"predictor\":\"" + fit.predictor + "\",\"points\":" + std::to_string(fit.points) +
            ",\"slope\":" + format_float(fit.slope) + ",\"intercept\":" +
            format_float(fit.intercept) + ",\"r2\":" + format_float(fit.r_squared) +
            ",\"ratio_min\":" + format_float(fit.ratio_min) + ",\"ratio_max\":" +
            format_float(fit.ratio_max) + "}\n";
    emit(opt, body, out);
  } else {
    std::string body = metadata_block(meta);
    body += "algorithm,k,predictor,points,slope,intercept,r2,ratio_min,ratio_max,ratio_band\n";
    body += std::string(to_string(algorithm)) + "," + std::to_string(opt.k) + "," +
            fit.predictor + "," + std::to_string(fit.points) + "," + format_float(fit.slope) +
            "," + format_float(fit.intercept) + "," + format_float(fit.r_squared) + "," +
            format_float(fit.ratio_min) + "," + format_float(fit.ratio_max) + "," +
            format_float(fit.ratio_band()) + "\n";
    emit(opt, body, out);
  }
  return kExitOk;
}

int cmd_lookup(const Options& opt, std::ostream& out) {
  LookupExperimentConfig c;
  c.n = opt.n;
  c.alpha = opt.alpha;
  c.table_size = opt.table_size;
  c.prefix_constants = parse_number_list(opt.constants);
  c.trials = opt.trials ? opt.trials : 1000;
  if (!opt.budgets.empty()) {
    const auto b = parse_budgets(opt.budgets);
    if (b.size() != 1) throw std::invalid_argument("lookup: --budgets takes a single value");
    c.budget = b.front();
  }
  c.heavy_bucket_cost = opt.heavy_cost;
  c.base_seed = opt.seed;
  c.metric = parse_error_metric(opt.metric);
  const auto rows = lookup_detection_experiment(c, opt.threads);

  std::map<std::string, std::string> meta = {
      {"command", "lookup"},
      {"n", std::to_string(c.n)},
      {"alpha", format_float(c.alpha)},
      {"T", std::to_string(c.table_size)},
      {"C", opt.constants},
      {"budget", std::to_string(c.budget ? c.budget : 10 * c.table_size)},
      {"heavy_cost", std::to_string(c.heavy_bucket_cost)},
      {"trials", std::to_string(c.trials)},
      {"seed", std::to_string(c.base_seed)},
      {"seed_schedule", "base_seed+trial"},
      {"metric", std::string(to_string(c.metric))},
  };
  std::string body;
  if (opt.format == "json") {
    body = "{\"metadata\":{";
    bool first = true;
    for (const auto& [k, v] : meta) {
      body += std::string(first ? "" : ",") + "\"" + k + "\":\"" + v + "\"";
      first = false;
    }
    body += "},\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      body += std::string(i ? "," : "") + "{\"C\":" + format_float(r.prefix_constant) +
              ",\"S\":" + std::to_string(r.prefix_length) + ",\"min_rate_top_half\":" +
              format_float(r.min_rate_top_half) + ",\"min_rate_rank\":" +
              std::to_string(r.min_rate_rank) + ",\"lookup_cm_mean\":" +
              format_float(r.lookup_cm.mean_err) + ",\"perfect_cm_mean\":" +
              format_float(r.perfect_cm.mean_err) + ",\"rates\":{";
      for (std::size_t j = 0; j < r.probes.size(); ++j) {
        body += std::string(j ? "," : "") + "\"" + std::to_string(r.probes[j].rank) +
                "\":" + format_float(r.probes[j].rate);
      }
      body += "}}";
    }
    body += "]}\n";
  } else {
    body = metadata_block(meta);
    body += "C,S,trials,min_rate_top_half,min_rate_rank,lookup_cm_mean,lookup_cm_ci95,"
            "perfect_cm_mean,perfect_cm_ci95";
    if (!rows.empty()) {
      for (const auto& p : rows.front().probes) body += ",rate@" + std::to_string(p.rank);
    }
    body += "\n";
    for (const auto& r : rows) {
      body += format_float(r.prefix_constant) + "," + std::to_string(r.prefix_length) + "," +
              std::to_string(r.trials) + "," + format_float(r.min_rate_top_half) + "," +
              std::to_string(r.min_rate_rank) + "," + format_float(r.lookup_cm.mean_err) + "," +
              format_float(r.lookup_cm.ci95) + "," + format_float(r.perfect_cm.mean_err) + "," +
              format_float(r.perfect_cm.ci95);
      for (const auto& p : r.probes) body += "," + format_float(p.rate);
      body += "\n";
    }
  }
  emit(opt, body, out);
  return kExitOk;
}

int cmd_noisy(const Options& opt, std::ostream& out) {
  NoisySweepConfig c;
  c.n = opt.n;
  c.alpha = opt.alpha;
  if (!opt.budgets.empty()) {
    const auto b = parse_budgets(opt.budgets);
    if (b.size() != 1) throw std::invalid_argument("noisy: --budgets takes a single value");
    c.budget = b.front();
  }
  c.deltas = parse_number_list(opt.deltas);
  c.trials = opt.trials ? opt.trials : 100;
  c.base_seed = opt.seed;
  c.metric = parse_error_metric(opt.metric);
  c.heavy_bucket_cost = opt.heavy_cost;
  c.heavy_override = opt.bh;
  NoisySweepResult result = noisy_oracle_sweep(c, opt.threads);
  result.metadata["command"] = "noisy";
  write_report(opt, result.combined(), "noisy heavy-hitter oracle", out);
  return kExitOk;
}

int cmd_exact_check(const Options& opt, std::ostream& out) {
  const std::size_t trials = opt.trials ? opt.trials : 200'000;
  const auto cases = run_anchor_checks(trials, opt.seed, opt.threads);
  std::size_t failed = 0;
  std::ostringstream s;
  s << "# trials=" << trials << "\n# seed=" << opt.seed << "\n# sigmas=" << kAnchorSigmas << "\n";
  for (const AnchorCase& c : cases) {
    const bool ok = c.within(kAnchorSigmas);
    failed += !ok;
    s << (ok ? "PASS " : "FAIL ") << c.label() << " exact=" << format_float(static_cast<double>(c.exact))
      << " mc=" << format_float(c.mc_mean) << " se=" << format_float(c.mc_se)
      << " z=" << format_float(c.z_score()) << "\n";
  }
  s << (failed ? "FAILED " : "OK ") << cases.size() - failed << "/" << cases.size()
    << " anchors within " << kAnchorSigmas << " standard errors\n";
  emit(opt, s.str(), out);
  return failed ? kExitFailure : kExitOk;
}

}  // namespace

std::vector<std::size_t> parse_budgets(const std::string& text) {
  std::vector<std::size_t> out;
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty budget list");
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) throw std::invalid_argument("budget range must be a:b:step");
    const std::size_t a = to_size(parts[0]), b = to_size(parts[1]), step = to_size(parts[2]);
    if (step == 0 || a > b) throw std::invalid_argument("budget range needs a <= b and step > 0");
    for (std::size_t v = a; v <= b; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(to_size(trim(part)));
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(part, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + part + "'");
    }
    if (pos != part.size()) throw std::invalid_argument("not a number: '" + part + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"zipfsketch: Count-Min / Count-Sketch and learned variants under Zipfian load"};
  app.require_subcommand(1);
  Options opt;

  auto* gen = app.add_subcommand("gen-zipf", "print Zipfian frequencies 1/i^alpha");
  gen->add_option("--n", opt.n, "number of items")->capture_default_str();
  gen->add_option("--alpha", opt.alpha, "Zipf exponent")->capture_default_str();
  gen->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  gen->add_option("--out", opt.out, "output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "error vs budget for one algorithm");
  add_common(sweep, opt, true, true);
  sweep->add_option("--algorithm", opt.algorithm, "CM | CS | LCM | LCS")->capture_default_str();

  auto* table = app.add_subcommand("table5", "learned vs standard error table");
  add_common(table, opt, false, false);

  auto* fit = app.add_subcommand("fit", "log-log scaling fit of a sweep");
  add_common(fit, opt, true, true);
  fit->add_option("--algorithm", opt.algorithm, "CM | CS | LCM | LCS")->capture_default_str();
  fit->add_option("--in", opt.in, "report CSV to fit (default: run a sweep)");
  fit->add_option("--predictor", opt.predictor,
                  "none | cm | cs | lcm | lcs | cm-alpha | lcm-alpha")
      ->capture_default_str();

  auto* lookup = app.add_subcommand("lookup", "lookup-table heavy-hitter detection");
  add_common(lookup, opt, false, false);
  lookup->add_option("--T", opt.table_size, "lookup table size")->capture_default_str();
  lookup->add_option("--C", opt.constants, "prefix constants, S = C*T*ln n")->capture_default_str();

  auto* noisy = app.add_subcommand("noisy", "error vs oracle misclassification rate");
  add_common(noisy, opt, false, true);
  noisy->add_option("--deltas", opt.deltas, "comma list of delta values")->capture_default_str();

  auto* exact = app.add_subcommand("exact-check", "Monte Carlo vs exact enumeration anchors");
  exact->add_option("--trials", opt.trials, "Monte Carlo trials per anchor (default 200000)");
  exact->add_option("--seed", opt.seed, "base seed")->capture_default_str();
  exact->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  exact->add_option("--out", opt.out, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_zipf(opt, out);
    if (sweep->parsed()) return cmd_sweep(opt, out);
    if (table->parsed()) return cmd_table5(opt, out);
    if (fit->parsed()) return cmd_fit(opt, out);
    if (lookup->parsed()) return cmd_lookup(opt, out);
    if (noisy->parsed()) return cmd_noisy(opt, out);
    if (exact->parsed()) return cmd_exact_check(opt, out);
  } catch (const GuardError& e) {
    err << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace zipfsketch::cli
