#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "zipfsketch/hashing.h"

namespace zipfsketch {

/// Zipfian ground truth f_i = 1 / i^alpha for items 1..n (so f_1 = 1).
class FrequencyVector {
 public:
  FrequencyVector(std::size_t n, double alpha);

  std::size_t size() const noexcept { return weights_.size(); }
  double alpha() const noexcept { return alpha_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Frequency of a 1-based item.
  double operator()(ItemId item) const { return weights_.at(item - 1); }

  /// N = sum of all weights (H_n when alpha = 1).
  double total() const noexcept { return total_; }

 private:
  double alpha_;
  std::vector<double> weights_;
  double total_;
};

/// Throws std::invalid_argument for n == 0 or alpha <= 0.
FrequencyVector zipf_frequencies(std::size_t n, double alpha);

/// sum_{i=1..n} i^-alpha, accumulated smallest term first.
double generalized_harmonic(std::size_t n, double alpha);

enum class ErrorMetric {
  /// sum_i f_i |est_i - f_i|
  kUnnormalized,
  /// The same sum divided by N = sum_i f_i.
  kNormalizedByTotal,
};

std::string_view to_string(ErrorMetric metric) noexcept;
/// Accepts "raw"/"unnormalized" and "normalized"; throws std::invalid_argument.
ErrorMetric parse_error_metric(std::string_view text);

/// Frequency-weighted absolute error of `estimates` (index i-1 holds item i).
/// Throws std::invalid_argument on length mismatch.
double weighted_error(const FrequencyVector& truth,
                      std::span<const double> estimates, ErrorMetric metric);

/// I.i.d. draws from Pr[item = i] = f_i / N by inverse CDF.
class StreamSampler {
 public:
  explicit StreamSampler(const FrequencyVector& truth);

  template <class Engine>
  ItemId operator()(Engine& engine) const {
    return from_unit(static_cast<double>(engine() >> 11) * 0x1.0p-53);
  }

  /// Item whose CDF interval contains u in [0, 1).
  ItemId from_unit(double u) const;

  std::size_t universe() const noexcept { return cdf_.size(); }

 private:
  // Normalized, nondecreasing prefix sums; cdf_.back() == 1.
  std::vector<double> cdf_;
};

/// m i.i.d. items, deterministic per seed (std::mt19937_64).
std::vector<ItemId> sample_stream(const FrequencyVector& truth, std::size_t m,
                                  std::uint64_t seed);

}  // namespace zipfsketch
