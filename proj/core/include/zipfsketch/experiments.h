#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zipfsketch/freq_model.h"
#include "zipfsketch/hashing.h"
#include "zipfsketch/learned.h"

namespace zipfsketch {

enum class Algorithm {
  kCountMin,
  kCountSketch,
  kLearnedCountMin,
  kLearnedCountSketch,
};

/// "CM", "CS", "LCM", "LCS".
std::string_view to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view text);
bool is_learned(Algorithm algorithm) noexcept;

enum class OracleKind { kPerfect, kNoisy, kLookup };

/// Oracle template for learned runs. Heavy counts come from the budget
/// (see ExperimentConfig::heavy_slots) and seeds from the trial schedule.
struct OracleSetting {
  OracleKind kind = OracleKind::kPerfect;
  double delta = 0.0;
  std::size_t prefix_length = 0;
  std::size_t table_size = 0;
};

/// "perfect", "noisy:<delta>", "lookup:<S>:<T>"; throws std::invalid_argument.
OracleSetting parse_oracle(std::string_view text);
std::string to_string(const OracleSetting& oracle);

struct ExperimentConfig {
  std::size_t n = 10'000;
  double alpha = 1.0;
  Algorithm algorithm = Algorithm::kCountMin;
  std::uint32_t rows = 1;
  std::vector<std::size_t> budgets;
  OracleSetting oracle;
  /// Overrides B_h = round(B / 10).
  std::optional<std::size_t> heavy_override;
  std::uint32_t heavy_bucket_cost = 2;
  std::size_t trials = 20;
  std::uint64_t base_seed = 42;
  ErrorMetric metric = ErrorMetric::kUnnormalized;
  HashKind hash_kind = HashKind::kTrulyRandom;
  std::uint32_t hash_independence = 2;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;

  /// Exact slots reserved at budget B (0 for unlearned algorithms).
  std::size_t heavy_slots(std::size_t budget) const;

  /// Trial t always runs with seed base_seed + t.
  std::uint64_t trial_seed(std::size_t trial) const noexcept { return base_seed + trial; }

  /// Every parameter, defaults expanded, as key/value pairs.
  std::map<std::string, std::string> describe() const;
};

struct BudgetLayout {
  std::size_t budget = 0;
  std::size_t heavy_slots = 0;
  std::uint32_t width = 0;
  /// Buckets lost to floor((B - cost * B_h) / k).
  std::size_t discarded = 0;
};

BudgetLayout layout_for(const ExperimentConfig& config, std::size_t budget);

struct TrialOutcome {
  double error = 0.0;
  std::size_t overflow_events = 0;
};

/// One trial: build the configured sketch, load the ground truth, estimate
/// every item and return the weighted error.
TrialOutcome run_single_trial(const ExperimentConfig& config, const FrequencyVector& truth,
                              std::size_t budget, std::size_t trial);
TrialOutcome run_single_trial(const ExperimentConfig& config, std::size_t budget,
                              std::size_t trial);

struct ReportRow {
  Algorithm algorithm = Algorithm::kCountMin;
  std::uint32_t rows = 1;
  std::size_t budget = 0;
  std::size_t heavy_slots = 0;
  std::uint32_t width = 0;
  double alpha = 1.0;
  ErrorMetric metric = ErrorMetric::kUnnormalized;
  std::size_t trials = 0;
  double mean_err = 0.0;
  /// Sample standard deviation over trials; 0 when trials == 1.
  double std_err = 0.0;
  /// 1.96 * std_err / sqrt(trials).
  double ci95 = 0.0;
  std::size_t overflow_events = 0;
  std::string oracle = "none";
  /// False when trials == 1 (std_err reported as 0).
  bool std_defined = true;

  bool operator==(const ReportRow&) const = default;
};

struct ErrorReport {
  std::vector<ReportRow> rows;
  /// Resolved configuration echo.
  std::map<std::string, std::string> metadata;

  bool operator==(const ErrorReport&) const = default;
};

/// Aggregates per-trial errors (fixed summation order).
ReportRow summarize(const ExperimentConfig& config, const BudgetLayout& layout,
                    const std::vector<TrialOutcome>& outcomes);

/// threads == 0 uses std::thread::hardware_concurrency().
std::vector<TrialOutcome> run_trials(const ExperimentConfig& config, std::size_t budget,
                                     unsigned threads = 0);

/// trials x budgets grid, parallel over trials, deterministic reduction.
ErrorReport run_sweep(const ExperimentConfig& config, unsigned threads = 0);

/// Column labels of the learned-vs-standard table, in output order.
inline constexpr std::string_view kTableColumns[] = {"CM k=1", "CM k=2", "L-CM",
                                                     "CS k=1", "CS k=3", "L-CS"};

struct TableReproduction {
  std::vector<std::size_t> budgets;
  /// One report per column of kTableColumns, rows ordered by budget.
  std::vector<ErrorReport> columns;
  std::map<std::string, std::string> metadata;

  /// All rows of all columns in one report.
  ErrorReport combined() const;
};

struct TableConfig {
  std::size_t n = 10'000;
  double alpha = 1.0;
  std::vector<std::size_t> budgets;
  std::size_t trials = 20;
  std::uint64_t base_seed = 42;
  ErrorMetric metric = ErrorMetric::kUnnormalized;
  std::uint32_t heavy_bucket_cost = 2;
};

/// Budgets 1000..5000 step 200.
std::vector<std::size_t> default_table_budgets();

/// CM k=1, CM k=2, L-CM, CS k=1, CS k=3, L-CS (learned: k=1, perfect oracle,
/// B_h = B/10, heavy cost 2).
TableReproduction reproduce_table(const TableConfig& config, unsigned threads = 0);

struct LookupExperimentConfig {
  std::size_t n = 10'000;
  double alpha = 1.0;
  std::size_t table_size = 100;
  /// S = round(C * T * ln n) for each C.
  std::vector<double> prefix_constants = {20.0};
  std::size_t trials = 1000;
  /// Total buckets for the end-to-end comparison; 0 means 10 * T.
  std::size_t budget = 0;
  std::uint32_t heavy_bucket_cost = 2;
  std::uint64_t base_seed = 42;
  ErrorMetric metric = ErrorMetric::kUnnormalized;
  /// Ranks to report; empty means {1, T/4, T/2, T, 2T}.
  std::vector<ItemId> probe_ranks;
};

struct DetectionRate {
  ItemId rank = 1;
  double rate = 0.0;
  double std_error = 0.0;
};

struct LookupExperimentRow {
  double prefix_constant = 0.0;
  std::size_t prefix_length = 0;
  std::size_t trials = 0;
  std::vector<DetectionRate> probes;
  /// Lowest detection rate over ranks 1..T/2, and where it occurs.
  double min_rate_top_half = 0.0;
  ItemId min_rate_rank = 1;
  ReportRow lookup_cm;
  ReportRow perfect_cm;
};

std::vector<LookupExperimentRow> lookup_detection_experiment(
    const LookupExperimentConfig& config, unsigned threads = 0);

struct NoisySweepConfig {
  std::size_t n = 10'000;
  double alpha = 1.0;
  std::size_t budget = 1000;
  std::vector<double> deltas = {0.0, 0.1, 0.5, 1.0};
  std::size_t trials = 100;
  std::uint64_t base_seed = 42;
  ErrorMetric metric = ErrorMetric::kUnnormalized;
  std::uint32_t heavy_bucket_cost = 2;
  std::optional<std::size_t> heavy_override;
};

struct NoisySweepResult {
  std::vector<double> deltas;
  /// One row per delta.
  std::vector<ReportRow> learned_cm;
  std::vector<ReportRow> learned_cs;
  /// Reference points sharing the same seeds.
  ReportRow perfect_cm;
  ReportRow perfect_cs;
  ReportRow standard_cm;
  ReportRow standard_cs;
  std::map<std::string, std::string> metadata;

  ErrorReport combined() const;
};

NoisySweepResult noisy_oracle_sweep(const NoisySweepConfig& config, unsigned threads = 0);

}  // namespace zipfsketch
