// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "zipfsketch/anchor_check.h"
#include "zipfsketch/experiments.h"
#include "zipfsketch/freq_model.h"
#include "zipfsketch/scaling_fit.h"
#include "zipfsketch/sketches.h"

using namespace zipfsketch;

namespace {

constexpr std::uint64_t kSeed = 42;

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(), seconds);
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool within_relative(double value, double reference, double tol) {
  return std::fabs(value - reference) <= tol * reference;
}

// Upper end of a's interval is below the lower end of b's.
bool separated_below(const ReportRow& a, const ReportRow& b) {
  return a.mean_err + a.ci95 < b.mean_err - b.ci95;
}

ExperimentConfig cm_config(std::size_t n, std::uint32_t rows, std::vector<std::size_t> budgets,
                           std::size_t trials, ErrorMetric metric) {
  ExperimentConfig c;
  c.n = n;
  c.alpha = 1.0;
  c.algorithm = Algorithm::kCountMin;
  c.rows = rows;
  c.budgets = std::move(budgets);
  c.trials = trials;
  c.base_seed = kSeed;
  c.metric = metric;
  return c;
}

void anchors() {
  Timer timer;
  const auto cases = run_anchor_checks(200'000, kSeed);
  std::size_t bad = 0;
  double worst = 0;
  std::string worst_label;
  for (const auto& c : cases) {
    bad += !c.within(3.0);
    if (c.z_score() > worst) {
      worst = c.z_score();
      worst_label = c.label();
    }
  }
  const double t = timer.seconds();
  report(1, bad == 0 && t < 120.0,
         std::to_string(cases.size() - bad) + "/" + std::to_string(cases.size()) +
             " anchors within 3 SE at 2e5 trials; max z " + fmt("%.2f", worst) + " [" +
             worst_label + "]",
         t);
}

void overestimation() {
  Timer timer;
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> n_dist(1, 5000);
  std::uniform_real_distribution<double> alpha_dist(0.3, 2.5);
  std::uniform_int_distribution<std::uint32_t> rows_dist(1, 6);
  std::uniform_int_distribution<std::uint32_t> width_dist(1, 600);
  std::size_t violations = 0, checked = 0;
  for (int cfg = 0; cfg < 1000; ++cfg) {
    const FrequencyVector f = zipf_frequencies(n_dist(rng), alpha_dist(rng));
    HashFamilyConfig h;
    h.kind = cfg % 2 ? HashKind::kKIndependent : HashKind::kTrulyRandom;
    h.independence = 2 + cfg % 3;
    h.seed = rng();
    h.rows = rows_dist(rng);
    h.width = width_dist(rng);
    CountMinSketch s(h);
    load_frequencies(s, f);
    for (ItemId i = 1; i <= f.size(); ++i) {
      violations += s.estimate(i) < f(i);
      ++checked;
    }
  }
  report(2, violations == 0,
         std::to_string(violations) + " underestimates over 1000 configurations (" +
             std::to_string(checked) + " items)",
         timer.seconds());
}

void table() {
  Timer timer;
  TableConfig c;
  c.trials = 100;
  c.base_seed = kSeed;
  const TableReproduction t = reproduce_table(c);
  const std::size_t probe_budgets[3] = {1000, 3000, 5000};
  const double reference[5][3] = {
      {0.085934, 0.032624, 0.01603}, {0.080569, 0.020155, 0.009767},
      {0.026391, 0.005101, 0.002233}, {0.058545, 0.023175, 0.014829},
      {0.054315, 0.016068, 0.009451}};
  const double tolerance[5] = {0.25, 0.25, 0.25, 0.5, 0.5};

  auto row_at = [&](std::size_t col, std::size_t budget) -> const ReportRow& {
    for (const auto& r : t.columns[col].rows) {
      if (r.budget == budget) return r;
    }
    throw std::logic_error("budget missing");
  };

  bool pass = true;
  std::string detail;
  for (std::size_t col = 0; col < 5; ++col) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double v = row_at(col, probe_budgets[j]).mean_err;
      const bool ok = within_relative(v, reference[col][j], tolerance[col]);
      pass &= ok;
      if (!ok) {
        detail += std::string(kTableColumns[col]) + "@" + std::to_string(probe_budgets[j]) + "=" +
                  fmt("%.4g", v) + " vs " + fmt("%.4g", reference[col][j]) + "; ";
      }
    }
  }
  std::size_t relational_fail = 0;
  double worst_ratio = 1e300;
  std::size_t worst_budget = 0;
  for (std::size_t b : t.budgets) {
    const ReportRow& lcs = row_at(5, b);
    const ReportRow& cs = row_at(3, b);
    const bool ok = lcs.mean_err + lcs.ci95 < (cs.mean_err - cs.ci95) / 10.0;
    relational_fail += !ok;
    const double ratio = cs.mean_err / lcs.mean_err;
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst_budget = b;
    }
  }
  pass &= relational_fail == 0;
  detail += "column checks " + std::string(detail.empty() ? "ok" : "failed above") +
            "; L-CS < CS(k=1)/10 with CI separation at " +
            std::to_string(t.budgets.size() - relational_fail) + "/" +
            std::to_string(t.budgets.size()) + " budgets, smallest CS/L-CS ratio " +
            fmt("%.2f", worst_ratio) + " at B=" + std::to_string(worst_budget);
  report(3, pass, detail, timer.seconds());
}

void scaling_laws() {
  Timer timer;
  std::vector<double> errs;
  for (const std::size_t n : {1'000, 10'000, 100'000}) {
    errs.push_back(run_sweep(cm_config(n, 1, {1000}, 100, ErrorMetric::kNormalizedByTotal))
                       .rows[0]
                       .mean_err);
  }
  const double ratio = errs[2] / errs[0];
  const double target = std::log(1e5) / std::log(1e3);
  const bool log_ok = ratio >= 0.7 * target && ratio <= 1.3 * target;

  const auto k2 = run_sweep(cm_config(10'000, 2, {500, 1000, 2000, 4000}, 100,
                                      ErrorMetric::kUnnormalized));
  const auto points = scaling_points(k2, Algorithm::kCountMin, 2);
  const ScalingFit fit = fit_scaling(points, make_predictor("cm", 10'000, 2, 1.0));
  report(4, log_ok && fit.ratio_band() < 2.0,
         "normalized CM k=1 err(1e5)/err(1e3) = " + fmt("%.3f", ratio) + " in [" +
             fmt("%.3f", 0.7 * target) + ", " + fmt("%.3f", 1.3 * target) +
             "]; CM k=2 err*B/log(2n/B) band " + fmt("%.3f", fit.ratio_band()),
         timer.seconds());
}

void generalized_zipf() {
  Timer timer;
  const std::vector<std::size_t> budgets = {250, 500, 1000, 2000};
  bool pass = true;
  std::string detail;
  for (const double alpha : {1.5, 2.0}) {
    ExperimentConfig c = cm_config(10'000, 1, budgets, 100, ErrorMetric::kUnnormalized);
    c.alpha = alpha;
    c.algorithm = Algorithm::kLearnedCountMin;
    const ScalingFit fit = fit_scaling(scaling_points(run_sweep(c), c.algorithm, 1));
    const double expected = 1.0 - 2.0 * alpha;
    const bool ok = std::fabs(fit.slope - expected) <= 0.2;
    pass &= ok;
    detail += "L-CM alpha=" + fmt("%g", alpha) + " slope " + fmt("%.3f", fit.slope) + " vs " +
              fmt("%g", expected) + "; ";
  }
  ExperimentConfig c = cm_config(10'000, 1, budgets, 100, ErrorMetric::kUnnormalized);
  c.alpha = 0.5;
  const ScalingFit fit = fit_scaling(scaling_points(run_sweep(c), c.algorithm, 1),
                                     make_predictor("cm-alpha", c.n, 1, c.alpha));
  pass &= fit.ratio_band() < 2.0;
  detail += "CM alpha=0.5 ratio band to n^(2-2a)/B " + fmt("%.3f", fit.ratio_band());
  report(5, pass, detail, timer.seconds());
}

void lookup() {
  Timer timer;
  LookupExperimentConfig c;
  c.n = 10'000;
  c.table_size = 100;
  c.prefix_constants = {20.0};
  c.trials = 1000;
  c.base_seed = kSeed;
  const auto row = lookup_detection_experiment(c).front();
  const double ratio = row.lookup_cm.mean_err / row.perfect_cm.mean_err;
  const bool pass = row.min_rate_top_half >= 0.99 && ratio >= 0.5 && ratio <= 2.0;
  report(6, pass,
         "S=" + std::to_string(row.prefix_length) + ", min detection over ranks <= 50 = " +
             fmt("%.3f", row.min_rate_top_half) + " (rank " + std::to_string(row.min_rate_rank) +
             "); Lookup-CM/Perfect-L-CM error ratio " + fmt("%.3f", ratio),
         timer.seconds());
}

void noisy() {
  Timer timer;
  NoisySweepConfig c;
  c.trials = 100;
  c.base_seed = kSeed;
  const NoisySweepResult r = noisy_oracle_sweep(c);
  const bool exact = r.learned_cm[0].mean_err == r.perfect_cm.mean_err &&
                     r.learned_cs[0].mean_err == r.perfect_cs.mean_err &&
                     r.learned_cm[0].std_err == r.perfect_cm.std_err &&
                     r.learned_cs[0].std_err == r.perfect_cs.std_err;
  bool monotone = true;
  for (const auto* curve : {&r.learned_cm, &r.learned_cs}) {
    for (std::size_t j = 1; j < curve->size(); ++j) {
      const ReportRow& lo = (*curve)[j - 1];
      const ReportRow& hi = (*curve)[j];
      monotone &= hi.mean_err + hi.ci95 >= lo.mean_err - lo.ci95;
    }
  }
  const double ratio = r.learned_cs.back().mean_err / r.standard_cs.mean_err;
  const bool worst_ok = ratio >= 0.5 && ratio <= 2.0;
  std::string curve = "L-CS errors";
  for (const auto& row : r.learned_cs) curve += " " + fmt("%.4g", row.mean_err);
  report(7, exact && monotone && worst_ok,
         std::string("delta=0 bit-exact ") + (exact ? "yes" : "no") + "; non-decreasing " +
             (monotone ? "yes" : "no") + "; " + curve + "; delta=1 L-CS / CS(k=1) " +
             fmt("%.3f", ratio),
         timer.seconds());
}

void k_choice() {
  Timer timer;
  std::vector<ReportRow> rows;
  for (const std::uint32_t k : {1u, 2u, 8u}) {
    rows.push_back(
        run_sweep(cm_config(10'000, k, {5000}, 200, ErrorMetric::kUnnormalized)).rows[0]);
  }
  const bool pass = separated_below(rows[1], rows[0]) && separated_below(rows[1], rows[2]);
  report(8, pass,
         "CM at B=5000: k=1 " + fmt("%.5f", rows[0].mean_err) + "+-" + fmt("%.5f", rows[0].ci95) +
             ", k=2 " + fmt("%.5f", rows[1].mean_err) + "+-" + fmt("%.5f", rows[1].ci95) +
             ", k=8 " + fmt("%.5f", rows[2].mean_err) + "+-" + fmt("%.5f", rows[2].ci95),
         timer.seconds());
}

}  // namespace

int main() {
  anchors();
  overestimation();
  table();
  scaling_laws();
  generalized_zipf();
  lookup();
  noisy();
  k_choice();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
