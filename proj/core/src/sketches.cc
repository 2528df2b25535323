#include "zipfsketch/sketches.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace zipfsketch {

namespace {

constexpr std::uint32_t kInlineMedianRows = 32;

std::vector<double> make_grid(const HashFamily& hash) {
  return std::vector<double>(std::size_t{hash.rows()} * hash.width(), 0.0);
}

void check_row_index(std::uint32_t r, std::uint32_t rows) {
  if (r >= rows) throw std::out_of_range("sketch: row " + std::to_string(r) + " out of range");
}

}  // namespace

CountMinSketch::CountMinSketch(const HashFamilyConfig& config)
    : hash_(config), counters_(make_grid(hash_)) {}

void CountMinSketch::insert(ItemId item, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("count-min: weight must be finite and >= 0");
  }
  const std::uint32_t w = width();
  for (std::uint32_t r = 0; r < rows(); ++r) {
    counters_[std::size_t{r} * w + hash_.row_bucket(r, item)] += weight;
  }
}

double CountMinSketch::estimate(ItemId item) const {
  const std::uint32_t w = width();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t r = 0; r < rows(); ++r) {
    best = std::min(best, counters_[std::size_t{r} * w + hash_.row_bucket(r, item)]);
  }
  return best;
}

std::span<const double> CountMinSketch::row(std::uint32_t r) const {
  check_row_index(r, rows());
  return {counters_.data() + std::size_t{r} * width(), width()};
}

void CountMinSketch::clear() noexcept { std::fill(counters_.begin(), counters_.end(), 0.0); }

CountSketch::CountSketch(const HashFamilyConfig& config)
    : hash_(config), counters_(make_grid(hash_)) {
  if (config.rows % 2 == 0) {
    throw std::invalid_argument("count-sketch: rows must be odd, got " +
                                std::to_string(config.rows));
  }
}

void CountSketch::insert(ItemId item, double weight) {
  if (!std::isfinite(weight)) throw std::invalid_argument("count-sketch: weight must be finite");
  const std::uint32_t w = width();
  for (std::uint32_t r = 0; r < rows(); ++r) {
    counters_[std::size_t{r} * w + hash_.row_bucket(r, item)] +=
        hash_.row_sign(r, item) * weight;
  }
}

double CountSketch::estimate(ItemId item) const {
  const std::uint32_t w = width();
  const std::uint32_t k = rows();
  auto corrected = [&](std::uint32_t r) {
    return hash_.row_sign(r, item) * counters_[std::size_t{r} * w + hash_.row_bucket(r, item)];
  };
  if (k == 1) return corrected(0);

  std::array<double, kInlineMedianRows> inline_buf;
  std::vector<double> heap_buf;
  std::span<double> values;
  if (k <= kInlineMedianRows) {
    values = std::span<double>(inline_buf.data(), k);
  } else {
    heap_buf.resize(k);
    values = heap_buf;
  }
  for (std::uint32_t r = 0; r < k; ++r) values[r] = corrected(r);
  auto mid = values.begin() + k / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::span<const double> CountSketch::row(std::uint32_t r) const {
  check_row_index(r, rows());
  return {counters_.data() + std::size_t{r} * width(), width()};
}

void CountSketch::clear() noexcept { std::fill(counters_.begin(), counters_.end(), 0.0); }

}  // namespace zipfsketch
