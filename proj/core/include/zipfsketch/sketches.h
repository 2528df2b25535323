#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "zipfsketch/freq_model.h"
#include "zipfsketch/hashing.h"

namespace zipfsketch {

/// Count-Min: k x w grid of nonnegative real counters; a point query returns
/// the minimum of the item's counters, which never underestimates.
class CountMinSketch {
 public:
  explicit CountMinSketch(const HashFamilyConfig& config);

  /// Throws std::invalid_argument for negative or non-finite weights.
  void insert(ItemId item, double weight);
  double estimate(ItemId item) const;

  std::uint32_t rows() const noexcept { return hash_.rows(); }
  std::uint32_t width() const noexcept { return hash_.width(); }
  const HashFamily& hash() const noexcept { return hash_; }
  std::span<const double> row(std::uint32_t r) const;

  void clear() noexcept;

 private:
  HashFamily hash_;
  std::vector<double> counters_;
};

/// Count-Sketch: counters accumulate s_l(j) * f_j; a point query returns the
/// median over rows of the sign-corrected counters. Rows must be odd.
class CountSketch {
 public:
  /// Throws std::invalid_argument when config.rows is even.
  explicit CountSketch(const HashFamilyConfig& config);

  void insert(ItemId item, double weight);
  double estimate(ItemId item) const;

  std::uint32_t rows() const noexcept { return hash_.rows(); }
  std::uint32_t width() const noexcept { return hash_.width(); }
  const HashFamily& hash() const noexcept { return hash_; }
  std::span<const double> row(std::uint32_t r) const;

  void clear() noexcept;

 private:
  HashFamily hash_;
  std::vector<double> counters_;
};

template <class S>
concept PointSketch = requires(S s, const S cs, ItemId item, double w) {
  s.insert(item, w);
  { cs.estimate(item) } -> std::convertible_to<double>;
};

/// Inserts weight f_i for every item 1..n.
template <PointSketch S>
void load_frequencies(S& sketch, const FrequencyVector& truth) {
  const auto weights = truth.weights();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sketch.insert(static_cast<ItemId>(i + 1), weights[i]);
  }
}

/// Inserts weight f_i for every item not in `exclude`.
template <PointSketch S>
void load_frequencies(S& sketch, const FrequencyVector& truth,
                      const std::unordered_set<ItemId>& exclude) {
  const auto weights = truth.weights();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto item = static_cast<ItemId>(i + 1);
    if (!exclude.contains(item)) sketch.insert(item, weights[i]);
  }
}

/// Estimates for items 1..n, index i-1 holding item i.
template <class S>
std::vector<double> estimate_all(const S& sketch, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sketch.estimate(static_cast<ItemId>(i + 1));
  return out;
}

}  // namespace zipfsketch
