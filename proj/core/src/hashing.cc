#include "zipfsketch/hashing.h"

#include <boost/math/distributions/chi_squared.hpp>

#include <stdexcept>
#include <string>

namespace zipfsketch {

namespace {

// Stream tags for sub-seed derivation.
constexpr std::uint64_t kBucketStream = 0x62756b74;  // "bukt"
constexpr std::uint64_t kSignStream = 0x7369676e;    // "sign"
constexpr std::uint64_t kAuditStream = 0x61756474;   // "audt"

constexpr std::size_t kMaxAuditCells = std::size_t{1} << 20;
constexpr double kAuditSignificance = 0.01;

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) noexcept {
  const detail::uint128 prod = static_cast<detail::uint128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(prod) & kMersennePrime61;
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kMersennePrime61) r -= kMersennePrime61;
  return r;
}

// Uniform coefficients in [0, p) by rejection on 61-bit words.
void draw_coefficients(std::uint64_t key, std::size_t count,
                       std::vector<std::uint64_t>& out) {
  std::uint64_t counter = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t c;
    do {
      c = detail::keyed_word(key, counter++) >> 3;
    } while (c >= kMersennePrime61);
    out.push_back(c);
  }
}

}  // namespace

namespace detail {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // Stafford variant 13 of the MurmurHash3 finalizer.
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t keyed_word(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t z = mix64(key + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  return mix64(z ^ (key >> 17) ^ (key << 47));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b) noexcept {
  return keyed_word(keyed_word(mix64(seed ^ 0x5851f42d4c957f2dULL), a), b);
}

}  // namespace detail

HashFamily::HashFamily(const HashFamilyConfig& config) : config_(config) {
  if (config_.rows == 0) throw std::invalid_argument("hash family: rows must be >= 1");
  if (config_.width == 0) throw std::invalid_argument("hash family: width must be >= 1");
  if (config_.kind == HashKind::kKIndependent && config_.independence == 0) {
    throw std::invalid_argument("hash family: independence must be >= 1");
  }
  bucket_keys_.reserve(config_.rows);
  sign_keys_.reserve(config_.rows);
  for (std::uint32_t row = 0; row < config_.rows; ++row) {
    bucket_keys_.push_back(detail::derive_seed(config_.seed, row, kBucketStream));
    sign_keys_.push_back(detail::derive_seed(config_.seed, row, kSignStream));
  }
  if (config_.kind == HashKind::kKIndependent) {
    bucket_coeffs_.reserve(std::size_t{config_.rows} * config_.independence);
    sign_coeffs_.reserve(std::size_t{config_.rows} * config_.independence);
    for (std::uint32_t row = 0; row < config_.rows; ++row) {
      draw_coefficients(bucket_keys_[row], config_.independence, bucket_coeffs_);
      draw_coefficients(sign_keys_[row], config_.independence, sign_coeffs_);
    }
  }
}

void HashFamily::check_row(std::uint32_t row) const {
  if (row >= config_.rows) {
    throw std::out_of_range("hash family: row " + std::to_string(row) +
                            " out of range (rows=" +
                            std::to_string(config_.rows) + ")");
  }
}

std::uint64_t HashFamily::eval_poly(std::span<const std::uint64_t> coeffs,
                                    ItemId item) const {
  if (item >= kMersennePrime61) {
    throw std::invalid_argument("hash family: item exceeds polynomial universe");
  }
  std::uint64_t acc = 0;
  for (const std::uint64_t c : coeffs) {
    acc = mulmod61(acc, item) + c;
    if (acc >= kMersennePrime61) acc -= kMersennePrime61;
  }
  return acc;
}

std::uint32_t HashFamily::row_bucket(std::uint32_t row, ItemId item) const {
  check_row(row);
  if (config_.kind == HashKind::kTrulyRandom) {
    return detail::reduce(detail::keyed_word(bucket_keys_[row], item), config_.width);
  }
  const std::span<const std::uint64_t> coeffs(
      bucket_coeffs_.data() + std::size_t{row} * config_.independence,
      config_.independence);
  return static_cast<std::uint32_t>(eval_poly(coeffs, item) % config_.width);
}

int HashFamily::row_sign(std::uint32_t row, ItemId item) const {
  check_row(row);
  std::uint64_t bit;
  if (config_.kind == HashKind::kTrulyRandom) {
    bit = detail::keyed_word(sign_keys_[row], item) >> 63;
  } else {
    const std::span<const std::uint64_t> coeffs(
        sign_coeffs_.data() + std::size_t{row} * config_.independence,
        config_.independence);
    bit = eval_poly(coeffs, item) & 1;
  }
  return bit ? 1 : -1;
}

IndependenceAuditReport independence_audit(const HashFamilyConfig& config,
                                           std::span<const ItemId> items,
                                           std::size_t trials) {
  if (items.empty()) throw std::invalid_argument("independence audit: no items");
  if (config.width == 0) throw std::invalid_argument("independence audit: width must be >= 1");

  std::size_t cells = 1;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (cells > kMaxAuditCells / config.width) {
      throw std::invalid_argument("independence audit: joint table too large");
    }
    cells *= config.width;
  }
  if (trials < 5 * cells) {
    throw std::invalid_argument(
        "independence audit: need at least 5 trials per cell (" +
        std::to_string(5 * cells) + ")");
  }

  std::vector<std::uint64_t> counts(cells, 0);
  HashFamilyConfig trial_config = config;
  trial_config.rows = 1;
  for (std::size_t t = 0; t < trials; ++t) {
    trial_config.seed = detail::derive_seed(config.seed, t, kAuditStream);
    const HashFamily family(trial_config);
    std::size_t cell = 0;
    for (const ItemId item : items) {
      cell = cell * config.width + family.row_bucket(0, item);
    }
    ++counts[cell];
  }

  IndependenceAuditReport report;
  report.cells = cells;
  report.trials = trials;
  report.degrees_of_freedom = cells - 1;
  if (cells == 1) {
    report.pass = true;
    return report;
  }
  const double expected = static_cast<double>(trials) / static_cast<double>(cells);
  for (const std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    report.chi_square += d * d / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(report.degrees_of_freedom));
  report.critical_value = boost::math::quantile(complement(dist, kAuditSignificance));
  report.pass = report.chi_square < report.critical_value;
  return report;
}

}  // namespace zipfsketch
