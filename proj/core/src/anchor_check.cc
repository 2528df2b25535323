#include "zipfsketch/anchor_check.h"

#include <cmath>
#include <cstdio>

#include "parallel.h"
#include "zipfsketch/exact_oracle.h"
#include "zipfsketch/freq_model.h"
#include "zipfsketch/sketches.h"

namespace zipfsketch {

double AnchorCase::z_score() const {
  const double diff = std::fabs(mc_mean - static_cast<double>(exact));
  if (mc_se == 0.0) return diff == 0.0 ? 0.0 : HUGE_VAL;
  return diff / mc_se;
}

bool AnchorCase::within(double sigmas) const {
  // A zero-variance sample must match up to rounding.
  if (mc_se == 0.0) return std::fabs(mc_mean - static_cast<double>(exact)) <= 1e-12;
  return z_score() <= sigmas;
}

std::string AnchorCase::label() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s n=%zu w=%u k=%u alpha=%g i=%llu",
                sketch == SketchKind::kCountMin ? "CM" : "CS", n, width, rows, alpha,
                static_cast<unsigned long long>(item));
  return buf;
}

void solve_anchor(AnchorCase& c) {
  const TinyInstance inst{zipf_frequencies(c.n, c.alpha), c.rows, c.width};
  c.exact = c.sketch == SketchKind::kCountMin ? exact_cm_error(inst, c.item)
                                              : exact_cs_error(inst, c.item);
}

void simulate_anchor(AnchorCase& c, std::size_t trials, std::uint64_t base_seed) {
  const FrequencyVector truth = zipf_frequencies(c.n, c.alpha);
  const double f = truth(c.item);
  HashFamilyConfig hash;
  hash.rows = c.rows;
  hash.width = c.width;
  long double sum = 0.0L, sum_sq = 0.0L;
  for (std::size_t t = 0; t < trials; ++t) {
    hash.seed = base_seed + t;
    double est;
    if (c.sketch == SketchKind::kCountMin) {
      CountMinSketch sketch(hash);
      load_frequencies(sketch, truth);
      est = sketch.estimate(c.item);
    } else {
      CountSketch sketch(hash);
      load_frequencies(sketch, truth);
      est = sketch.estimate(c.item);
    }
    const long double err = std::fabs(est - f);
    sum += err;
    sum_sq += err * err;
  }
  const long double m = static_cast<long double>(trials);
  const long double mean = sum / m;
  const long double var = trials > 1 ? (sum_sq - m * mean * mean) / (m - 1) : 0.0L;
  c.trials = trials;
  c.mc_mean = static_cast<double>(mean);
  c.mc_se = static_cast<double>(std::sqrt(std::max(var, 0.0L) / m));
}

std::vector<AnchorCase> default_anchor_grid() {
  std::vector<AnchorCase> grid;
  for (const SketchKind kind : {SketchKind::kCountMin, SketchKind::kCountSketch}) {
    const std::uint32_t row_options[2] = {1, kind == SketchKind::kCountMin ? 2u : 3u};
    for (const std::size_t n : {2, 3, 4, 5}) {
      for (const std::uint32_t w : {2u, 3u}) {
        for (const std::uint32_t k : row_options) {
          for (const double alpha : {0.5, 1.0, 2.0}) {
            AnchorCase c;
            c.sketch = kind;
            c.n = n;
            c.width = w;
            c.rows = k;
            c.alpha = alpha;
            c.item = 1;
            grid.push_back(c);
          }
        }
      }
    }
  }
  return grid;
}

std::vector<AnchorCase> run_anchor_checks(std::size_t trials, std::uint64_t base_seed,
                                          unsigned threads) {
  std::vector<AnchorCase> grid = default_anchor_grid();
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    solve_anchor(grid[i]);
    simulate_anchor(grid[i], trials, base_seed);
  });
  return grid;
}

}  // namespace zipfsketch
