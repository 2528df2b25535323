#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zipfsketch/experiments.h"

namespace zipfsketch {

struct ScalingPoint {
  double budget = 0.0;
  double error = 0.0;
};

/// Asymptotic error form g(B) used to check Theta-stability of err / g(B).
struct Predictor {
  std::string description = "1";
  std::function<double(double)> value = [](double) { return 1.0; };
};

/// Predictors for the error laws of the standard and learned sketches.
/// Names: "none", "cm" (k=1: log n / B, k>1: k log(kn/B) / B),
/// "cs" (k=1: log B / B, k>1: sqrt(k) / B), "lcm" (log^2(n/B) / (B log n)),
/// "lcs" (log(n/B) / (B log n)), "cm-alpha" (k n^(2-2a) / B for a < 1),
/// "lcm-alpha" (B^(1-2a) for a > 1, n^(2-2a) / B for a < 1).
/// Throws std::invalid_argument for unknown names.
Predictor make_predictor(const std::string& name, std::size_t n, std::uint32_t rows,
                         double alpha);

struct ScalingFit {
  /// Least squares on (log B, log err): err ~ exp(intercept) * B^slope.
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Range of err / g(B) over the points.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::string predictor;
  std::size_t points = 0;

  double ratio_band() const noexcept { return ratio_max / ratio_min; }
};

/// Throws std::invalid_argument for fewer than 4 points and DataError for
/// nonpositive budgets, errors or predictor values.
ScalingFit fit_scaling(std::span<const ScalingPoint> points, const Predictor& predictor = {});

/// Points (budget, mean_err) of the rows matching (algorithm, k).
std::vector<ScalingPoint> scaling_points(const ErrorReport& report, Algorithm algorithm,
                                         std::uint32_t rows);

}  // namespace zipfsketch
