#include "zipfsketch/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "parallel.h"
#include "zipfsketch/sketches.h"

namespace zipfsketch {

namespace {

constexpr std::uint64_t kOracleStream = 0x6f72636c;  // "orcl"
constexpr double kZ95 = 1.96;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parse_double(std::string_view text, const char* what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + s + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view text, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" +
                                std::string(text) + "'");
  }
  return v;
}

HeavyHitterOracle make_oracle(const ExperimentConfig& config, const FrequencyVector& truth,
                              std::size_t heavy_slots, std::uint64_t trial_seed) {
  OracleSpec spec;
  switch (config.oracle.kind) {
    case OracleKind::kPerfect:
      spec = PerfectOracle{heavy_slots};
      break;
    case OracleKind::kNoisy:
      spec = NoisyOracle{heavy_slots, config.oracle.delta,
                         detail::derive_seed(trial_seed, 1, kOracleStream)};
      break;
    case OracleKind::kLookup:
      spec = LookupOracle{config.oracle.prefix_length, config.oracle.table_size,
                          detail::derive_seed(trial_seed, 2, kOracleStream)};
      break;
  }
  HeavyHitterOracle oracle(std::move(spec));
  oracle.build(truth);
  return oracle;
}

template <class Sketch>
TrialOutcome evaluate(const Sketch& sketch, const FrequencyVector& truth, ErrorMetric metric,
                      std::size_t overflow) {
  const std::vector<double> est = estimate_all(sketch, truth.size());
  return {weighted_error(truth, est, metric), overflow};
}

template <class Inner>
TrialOutcome run_learned(const ExperimentConfig& config, const FrequencyVector& truth,
                         const BudgetLayout& layout, const HashFamilyConfig& hash,
                         std::uint64_t seed) {
  LearnedSketch<Inner> sketch(make_oracle(config, truth, layout.heavy_slots, seed), Inner(hash),
                              config.heavy_bucket_cost);
  sketch.load(truth);
  return evaluate(sketch, truth, config.metric, sketch.overflow_events());
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::kCountMin:
      return "CM";
    case Algorithm::kCountSketch:
      return "CS";
    case Algorithm::kLearnedCountMin:
      return "LCM";
    case Algorithm::kLearnedCountSketch:
      return "LCS";
  }
  return "CM";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "CM" || text == "cm") return Algorithm::kCountMin;
  if (text == "CS" || text == "cs") return Algorithm::kCountSketch;
  if (text == "LCM" || text == "lcm" || text == "L-CM") return Algorithm::kLearnedCountMin;
  if (text == "LCS" || text == "lcs" || text == "L-CS") return Algorithm::kLearnedCountSketch;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

bool is_learned(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::kLearnedCountMin || algorithm == Algorithm::kLearnedCountSketch;
}

OracleSetting parse_oracle(std::string_view text) {
  OracleSetting out;
  if (text == "perfect") return out;
  if (text.starts_with("noisy:")) {
    out.kind = OracleKind::kNoisy;
    out.delta = parse_double(text.substr(6), "delta");
    if (!(out.delta >= 0.0 && out.delta <= 1.0)) {
      throw std::invalid_argument("noisy oracle: delta must lie in [0, 1]");
    }
    return out;
  }
  if (text.starts_with("lookup:")) {
    const std::string_view rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("lookup oracle: expected lookup:<S>:<T>");
    }
    out.kind = OracleKind::kLookup;
    out.prefix_length = parse_size(rest.substr(0, colon), "S");
    out.table_size = parse_size(rest.substr(colon + 1), "T");
    if (out.table_size == 0) throw std::invalid_argument("lookup oracle: T must be >= 1");
    return out;
  }
  throw std::invalid_argument("unknown oracle '" + std::string(text) + "'");
}

std::string to_string(const OracleSetting& oracle) {
  switch (oracle.kind) {
    case OracleKind::kPerfect:
      return "perfect";
    case OracleKind::kNoisy:
      return "noisy:" + fmt9(oracle.delta);
    case OracleKind::kLookup:
      return "lookup:" + std::to_string(oracle.prefix_length) + ":" +
             std::to_string(oracle.table_size);
  }
  return "perfect";
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("config: n must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
  if (rows == 0) throw std::invalid_argument("config: k must be >= 1");
  if (budgets.empty()) throw std::invalid_argument("config: budgets must be nonempty");
  if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  const bool count_sketch = algorithm == Algorithm::kCountSketch ||
                            algorithm == Algorithm::kLearnedCountSketch;
  if (count_sketch && rows % 2 == 0) {
    throw std::invalid_argument("config: count-sketch needs an odd number of rows");
  }
  if (is_learned(algorithm) && oracle.kind == OracleKind::kLookup && oracle.table_size == 0) {
    throw std::invalid_argument("config: lookup oracle needs T >= 1");
  }
  for (const std::size_t b : budgets) layout_for(*this, b);
}

std::size_t ExperimentConfig::heavy_slots(std::size_t budget) const {
  if (!is_learned(algorithm)) return 0;
  if (oracle.kind == OracleKind::kLookup) return oracle.table_size;
  if (heavy_override) return *heavy_override;
  return static_cast<std::size_t>(std::llround(static_cast<double>(budget) / 10.0));
}

std::map<std::string, std::string> ExperimentConfig::describe() const {
  std::string budget_list;
  for (const std::size_t b : budgets) {
    if (!budget_list.empty()) budget_list += ',';
    budget_list += std::to_string(b);
  }
  return {
      {"algorithm", std::string(to_string(algorithm))},
      {"alpha", fmt9(alpha)},
      {"budgets", budget_list},
      {"hash", hash_kind == HashKind::kTrulyRandom
                   ? std::string("truly-random")
                   : "k-independent:" + std::to_string(hash_independence)},
      {"heavy_cost", std::to_string(heavy_bucket_cost)},
      {"heavy_rule", heavy_override ? std::to_string(*heavy_override) : std::string("round(B/10)")},
      {"k", std::to_string(rows)},
      {"metric", std::string(to_string(metric))},
      {"n", std::to_string(n)},
      {"oracle", is_learned(algorithm) ? to_string(oracle) : std::string("none")},
      {"seed", std::to_string(base_seed)},
      {"seed_schedule", "base_seed+trial"},
      {"trials", std::to_string(trials)},
  };
}

BudgetLayout layout_for(const ExperimentConfig& config, std::size_t budget) {
  BudgetLayout layout;
  layout.budget = budget;
  layout.heavy_slots = config.heavy_slots(budget);
  if (is_learned(config.algorithm)) {
    layout.width = budget_split(budget, layout.heavy_slots, config.heavy_bucket_cost, config.rows);
  } else {
    if (budget < config.rows) {
      throw std::invalid_argument("config: budget " + std::to_string(budget) +
                                  " is smaller than k");
    }
    layout.width = static_cast<std::uint32_t>(budget / config.rows);
  }
  layout.discarded = budget - layout.heavy_slots * (is_learned(config.algorithm)
                                                        ? config.heavy_bucket_cost
                                                        : 0) -
                     std::size_t{layout.width} * config.rows;
  return layout;
}

TrialOutcome run_single_trial(const ExperimentConfig& config, const FrequencyVector& truth,
                              std::size_t budget, std::size_t trial) {
  const BudgetLayout layout = layout_for(config, budget);
  const std::uint64_t seed = config.trial_seed(trial);
  HashFamilyConfig hash;
  hash.kind = config.hash_kind;
  hash.independence = config.hash_independence;
  hash.seed = seed;
  hash.rows = config.rows;
  hash.width = layout.width;

  switch (config.algorithm) {
    case Algorithm::kCountMin: {
      CountMinSketch sketch(hash);
      load_frequencies(sketch, truth);
      return evaluate(sketch, truth, config.metric, 0);
    }
    case Algorithm::kCountSketch: {
      CountSketch sketch(hash);
      load_frequencies(sketch, truth);
      return evaluate(sketch, truth, config.metric, 0);
    }
    case Algorithm::kLearnedCountMin:
      return run_learned<CountMinSketch>(config, truth, layout, hash, seed);
    case Algorithm::kLearnedCountSketch:
      return run_learned<CountSketch>(config, truth, layout, hash, seed);
  }
  throw std::logic_error("unreachable");
}

TrialOutcome run_single_trial(const ExperimentConfig& config, std::size_t budget,
                              std::size_t trial) {
  return run_single_trial(config, zipf_frequencies(config.n, config.alpha), budget, trial);
}

ReportRow summarize(const ExperimentConfig& config, const BudgetLayout& layout,
                    const std::vector<TrialOutcome>& outcomes) {
  ReportRow row;
  row.algorithm = config.algorithm;
  row.rows = config.rows;
  row.budget = layout.budget;
  row.heavy_slots = layout.heavy_slots;
  row.width = layout.width;
  row.alpha = config.alpha;
  row.metric = config.metric;
  row.trials = outcomes.size();
  row.oracle = is_learned(config.algorithm) ? to_string(config.oracle) : "none";

  long double sum = 0.0L;
  for (const TrialOutcome& o : outcomes) {
    sum += o.error;
    row.overflow_events += o.overflow_events;
  }
  const long double mean = outcomes.empty() ? 0.0L : sum / outcomes.size();
  row.mean_err = static_cast<double>(mean);
  if (outcomes.size() < 2) {
    row.std_defined = false;
    return row;
  }
  long double ss = 0.0L;
  for (const TrialOutcome& o : outcomes) ss += (o.error - mean) * (o.error - mean);
  row.std_err = static_cast<double>(std::sqrt(ss / (outcomes.size() - 1)));
  row.ci95 = kZ95 * row.std_err / std::sqrt(static_cast<double>(outcomes.size()));
  return row;
}

std::vector<TrialOutcome> run_trials(const ExperimentConfig& config, std::size_t budget,
                                     unsigned threads) {
  config.validate();
  const FrequencyVector truth = zipf_frequencies(config.n, config.alpha);
  std::vector<TrialOutcome> out(config.trials);
  detail::parallel_for(config.trials, threads,
               [&](std::size_t t) { out[t] = run_single_trial(config, truth, budget, t); });
  return out;
}

ErrorReport run_sweep(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const FrequencyVector truth = zipf_frequencies(config.n, config.alpha);
  const std::size_t cells = config.budgets.size() * config.trials;
  std::vector<TrialOutcome> outcomes(cells);
  detail::parallel_for(cells, threads, [&](std::size_t idx) {
    const std::size_t b = idx / config.trials;
    const std::size_t t = idx % config.trials;
    outcomes[idx] = run_single_trial(config, truth, config.budgets[b], t);
  });

  ErrorReport report;
  report.metadata = config.describe();
  for (std::size_t b = 0; b < config.budgets.size(); ++b) {
    const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>(b * config.trials);
    const std::vector<TrialOutcome> slice(first, first + static_cast<std::ptrdiff_t>(config.trials));
    report.rows.push_back(summarize(config, layout_for(config, config.budgets[b]), slice));
  }
  return report;
}

ErrorReport TableReproduction::combined() const {
  ErrorReport out;
  out.metadata = metadata;
  for (const ErrorReport& col : columns) {
    out.rows.insert(out.rows.end(), col.rows.begin(), col.rows.end());
  }
  return out;
}

std::vector<std::size_t> default_table_budgets() {
  std::vector<std::size_t> out;
  for (std::size_t b = 1000; b <= 5000; b += 200) out.push_back(b);
  return out;
}

TableReproduction reproduce_table(const TableConfig& config, unsigned threads) {
  TableReproduction table;
  table.budgets = config.budgets.empty() ? default_table_budgets() : config.budgets;

  auto column = [&](Algorithm algorithm, std::uint32_t rows) {
    ExperimentConfig c;
    c.n = config.n;
    c.alpha = config.alpha;
    c.algorithm = algorithm;
    c.rows = rows;
    c.budgets = table.budgets;
    c.heavy_bucket_cost = config.heavy_bucket_cost;
    c.trials = config.trials;
    c.base_seed = config.base_seed;
    c.metric = config.metric;
    return run_sweep(c, threads);
  };
  table.columns.push_back(column(Algorithm::kCountMin, 1));
  table.columns.push_back(column(Algorithm::kCountMin, 2));
  table.columns.push_back(column(Algorithm::kLearnedCountMin, 1));
  table.columns.push_back(column(Algorithm::kCountSketch, 1));
  table.columns.push_back(column(Algorithm::kCountSketch, 3));
  table.columns.push_back(column(Algorithm::kLearnedCountSketch, 1));

  std::string budget_list;
  for (const std::size_t b : table.budgets) {
    if (!budget_list.empty()) budget_list += ',';
    budget_list += std::to_string(b);
  }
  table.metadata = {
      {"alpha", fmt9(config.alpha)},
      {"budgets", budget_list},
      {"columns", "CM k=1;CM k=2;L-CM;CS k=1;CS k=3;L-CS"},
      {"heavy_cost", std::to_string(config.heavy_bucket_cost)},
      {"heavy_rule", "round(B/10)"},
      {"learned_k", "1"},
      {"metric", std::string(to_string(config.metric))},
      {"n", std::to_string(config.n)},
      {"oracle", "perfect"},
      {"seed", std::to_string(config.base_seed)},
      {"seed_schedule", "base_seed+trial"},
      {"trials", std::to_string(config.trials)},
  };
  return table;
}

std::vector<LookupExperimentRow> lookup_detection_experiment(
    const LookupExperimentConfig& config, unsigned threads) {
  if (config.table_size == 0) throw std::invalid_argument("lookup experiment: T must be >= 1");
  if (config.table_size > config.n) throw std::invalid_argument("lookup experiment: T exceeds n");
  if (config.trials == 0) throw std::invalid_argument("lookup experiment: trials must be >= 1");
  const std::size_t t_size = config.table_size;
  const std::size_t budget = config.budget ? config.budget : 10 * t_size;

  std::vector<ItemId> probes = config.probe_ranks;
  if (probes.empty()) {
    probes = {1, std::max<ItemId>(1, t_size / 4), std::max<ItemId>(1, t_size / 2), t_size,
              2 * t_size};
  }
  probes.erase(std::remove_if(probes.begin(), probes.end(),
                              [&](ItemId r) { return r == 0 || r > config.n; }),
               probes.end());
  const ItemId half = std::max<ItemId>(1, t_size / 2);
  ItemId tracked = half;
  for (const ItemId r : probes) tracked = std::max(tracked, r);
  tracked = std::min<ItemId>(tracked, config.n);

  const FrequencyVector truth = zipf_frequencies(config.n, config.alpha);

  ExperimentConfig lookup_cfg;
  lookup_cfg.n = config.n;
  lookup_cfg.alpha = config.alpha;
  lookup_cfg.algorithm = Algorithm::kLearnedCountMin;
  lookup_cfg.budgets = {budget};
  lookup_cfg.heavy_bucket_cost = config.heavy_bucket_cost;
  lookup_cfg.trials = config.trials;
  lookup_cfg.base_seed = config.base_seed;
  lookup_cfg.metric = config.metric;
  lookup_cfg.oracle.kind = OracleKind::kLookup;
  lookup_cfg.oracle.table_size = t_size;

  ExperimentConfig perfect_cfg = lookup_cfg;
  perfect_cfg.oracle = OracleSetting{};
  perfect_cfg.heavy_override = t_size;
  const BudgetLayout perfect_layout = layout_for(perfect_cfg, budget);

  std::vector<TrialOutcome> perfect(config.trials);
  detail::parallel_for(config.trials, threads, [&](std::size_t t) {
    perfect[t] = run_single_trial(perfect_cfg, truth, budget, t);
  });
  const ReportRow perfect_row = summarize(perfect_cfg, perfect_layout, perfect);

  std::vector<LookupExperimentRow> rows;
  for (const double constant : config.prefix_constants) {
    lookup_cfg.oracle.prefix_length = static_cast<std::size_t>(std::llround(
        constant * static_cast<double>(t_size) * std::log(static_cast<double>(config.n))));

    std::vector<TrialOutcome> outcomes(config.trials);
    std::vector<std::vector<std::uint8_t>> hits(config.trials);
    detail::parallel_for(config.trials, threads, [&](std::size_t t) {
      const std::uint64_t seed = lookup_cfg.trial_seed(t);
      HeavyHitterOracle oracle(
          LookupOracle{lookup_cfg.oracle.prefix_length, t_size,
                       detail::derive_seed(seed, 2, kOracleStream)});
      oracle.build(truth);
      auto& h = hits[t];
      h.assign(tracked, 0);
      for (ItemId r = 1; r <= tracked; ++r) h[r - 1] = oracle.lookup_table()->contains(r);
      outcomes[t] = run_single_trial(lookup_cfg, truth, budget, t);
    });

    LookupExperimentRow row;
    row.prefix_constant = constant;
    row.prefix_length = lookup_cfg.oracle.prefix_length;
    row.trials = config.trials;
    auto rate_of = [&](ItemId r) {
      std::size_t count = 0;
      for (const auto& h : hits) count += h[r - 1];
      const double p = static_cast<double>(count) / static_cast<double>(config.trials);
      return DetectionRate{r, p, std::sqrt(p * (1.0 - p) / static_cast<double>(config.trials))};
    };
    for (const ItemId r : probes) row.probes.push_back(rate_of(r));
    row.min_rate_top_half = 1.0;
    for (ItemId r = 1; r <= std::min<ItemId>(half, config.n); ++r) {
      const double p = rate_of(r).rate;
      if (p < row.min_rate_top_half) {
        row.min_rate_top_half = p;
        row.min_rate_rank = r;
      }
    }
    row.lookup_cm = summarize(lookup_cfg, layout_for(lookup_cfg, budget), outcomes);
    row.perfect_cm = perfect_row;
    rows.push_back(std::move(row));
  }
  return rows;
}

ErrorReport NoisySweepResult::combined() const {
  ErrorReport out;
  out.metadata = metadata;
  out.rows.insert(out.rows.end(), learned_cm.begin(), learned_cm.end());
  out.rows.insert(out.rows.end(), learned_cs.begin(), learned_cs.end());
  for (const ReportRow* r : {&perfect_cm, &perfect_cs, &standard_cm, &standard_cs}) {
    out.rows.push_back(*r);
  }
  return out;
}

NoisySweepResult noisy_oracle_sweep(const NoisySweepConfig& config, unsigned threads) {
  for (const double d : config.deltas) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("noisy sweep: delta must lie in [0, 1]");
  }
  ExperimentConfig base;
  base.n = config.n;
  base.alpha = config.alpha;
  base.budgets = {config.budget};
  base.trials = config.trials;
  base.base_seed = config.base_seed;
  base.metric = config.metric;
  base.heavy_bucket_cost = config.heavy_bucket_cost;
  base.heavy_override = config.heavy_override;

  auto run = [&](Algorithm algorithm, const OracleSetting& oracle) {
    ExperimentConfig c = base;
    c.algorithm = algorithm;
    c.oracle = oracle;
    return run_sweep(c, threads).rows.front();
  };

  NoisySweepResult result;
  result.deltas = config.deltas;
  for (const double d : config.deltas) {
    const OracleSetting noisy{OracleKind::kNoisy, d, 0, 0};
    result.learned_cm.push_back(run(Algorithm::kLearnedCountMin, noisy));
    result.learned_cs.push_back(run(Algorithm::kLearnedCountSketch, noisy));
  }
  result.perfect_cm = run(Algorithm::kLearnedCountMin, OracleSetting{});
  result.perfect_cs = run(Algorithm::kLearnedCountSketch, OracleSetting{});
  result.standard_cm = run(Algorithm::kCountMin, OracleSetting{});
  result.standard_cs = run(Algorithm::kCountSketch, OracleSetting{});

  std::string delta_list;
  for (const double d : config.deltas) {
    if (!delta_list.empty()) delta_list += ',';
    delta_list += fmt9(d);
  }
  result.metadata = base.describe();
  result.metadata.erase("algorithm");
  result.metadata["oracle"] = "noisy";
  result.metadata["deltas"] = delta_list;
  return result;
}

}  // namespace zipfsketch
