#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "zipfsketch/hashing.h"

namespace zipfsketch {

enum class SketchKind { kCountMin, kCountSketch };

/// One tiny instance compared between enumeration and simulation.
struct AnchorCase {
  SketchKind sketch = SketchKind::kCountMin;
  std::size_t n = 2;
  std::uint32_t width = 2;
  std::uint32_t rows = 1;
  double alpha = 1.0;
  ItemId item = 1;

  long double exact = 0.0L;
  double mc_mean = 0.0;
  /// Standard error of mc_mean.
  double mc_se = 0.0;
  std::size_t trials = 0;

  /// |mc_mean - exact| / mc_se (0 when both agree exactly).
  double z_score() const;
  bool within(double sigmas) const;
  std::string label() const;
};

/// Monte Carlo E|f~_i - f_i| for one case using the real sketch classes over
/// `trials` truly-random hash families seeded base_seed + t.
void simulate_anchor(AnchorCase& c, std::size_t trials, std::uint64_t base_seed);

/// Fills `exact` by enumeration.
void solve_anchor(AnchorCase& c);

/// Grid n in {2,3,4,5}, width in {2,3}, alpha in {0.5,1,2}; Count-Min with
/// k in {1,2}, Count-Sketch with k in {1,3}; query item 1.
std::vector<AnchorCase> default_anchor_grid();

/// Solves and simulates every case of the default grid.
std::vector<AnchorCase> run_anchor_checks(std::size_t trials, std::uint64_t base_seed,
                                          unsigned threads = 0);

}  // namespace zipfsketch
