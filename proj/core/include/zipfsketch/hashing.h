#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zipfsketch {

/// Items are 1-based ranks: item 1 is the most frequent.
using ItemId = std::uint64_t;

enum class HashKind {
  /// Ideal hashing, simulated with a keyed counter-mode generator.
  kTrulyRandom,
  /// Random polynomial over GF(2^61 - 1), reduced modulo the width.
  kKIndependent,
};

struct HashFamilyConfig {
  HashKind kind = HashKind::kTrulyRandom;
  /// For kKIndependent: the family is this-wise independent (a polynomial
  /// with this many coefficients, i.e. degree independence - 1).
  std::uint32_t independence = 2;
  std::uint64_t seed = 0;
  std::uint32_t rows = 1;
  std::uint32_t width = 1;
};

/// Prime modulus of the polynomial family.
inline constexpr std::uint64_t kMersennePrime61 = (std::uint64_t{1} << 61) - 1;

/// One bucket hash h_l and one sign hash s_l per row.
///
/// Every row owns two sub-seeds derived from (seed, row, stream tag), one for
/// buckets and one for signs, so a row's mapping does not depend on how many
/// rows the family has and adding rows leaves existing rows untouched.
///
/// Evaluation is a pure function of (config, row, item), so a family is
/// immutable after construction and may be shared between threads.
class HashFamily {
 public:
  explicit HashFamily(const HashFamilyConfig& config);

  const HashFamilyConfig& config() const noexcept { return config_; }
  std::uint32_t rows() const noexcept { return config_.rows; }
  std::uint32_t width() const noexcept { return config_.width; }

  /// Bucket in [0, width). Throws std::out_of_range for row >= rows.
  std::uint32_t row_bucket(std::uint32_t row, ItemId item) const;

  /// +1 or -1, drawn independently of the bucket. Throws std::out_of_range
  /// for row >= rows.
  int row_sign(std::uint32_t row, ItemId item) const;

 private:
  void check_row(std::uint32_t row) const;
  std::uint64_t eval_poly(std::span<const std::uint64_t> coeffs,
                          ItemId item) const;

  HashFamilyConfig config_;
  std::vector<std::uint64_t> bucket_keys_;
  std::vector<std::uint64_t> sign_keys_;
  // rows x independence, highest-degree coefficient first.
  std::vector<std::uint64_t> bucket_coeffs_;
  std::vector<std::uint64_t> sign_coeffs_;
};

struct IndependenceAuditReport {
  double chi_square = 0.0;
  double critical_value = 0.0;
  std::size_t degrees_of_freedom = 0;
  std::size_t cells = 0;
  std::size_t trials = 0;
  bool pass = false;
};

/// Chi-square test of the joint bucket distribution of `items` (row 0)
/// across `trials` independently re-seeded families against the uniform
/// product distribution, at significance 0.01.
///
/// Throws std::invalid_argument when items is empty, when the table has more
/// than 2^20 cells, or when fewer than 5 trials per cell are available.
IndependenceAuditReport independence_audit(const HashFamilyConfig& config,
                                           std::span<const ItemId> items,
                                           std::size_t trials);

namespace detail {

__extension__ using uint128 = unsigned __int128;

/// 64-bit finalizer-style mixer used as the keyed generator.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Keyed pseudorandom word for position `counter` of stream `key`.
std::uint64_t keyed_word(std::uint64_t key, std::uint64_t counter) noexcept;

/// Derives an independent sub-seed for (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b) noexcept;

/// Maps a 64-bit word to [0, range) by multiply-shift.
inline std::uint32_t reduce(std::uint64_t word, std::uint32_t range) noexcept {
  return static_cast<std::uint32_t>(
      (static_cast<uint128>(word) * range) >> 64);
}

/// Uniform double in [0, 1) from the top 53 bits of a word.
inline double unit_interval(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace detail

}  // namespace zipfsketch
