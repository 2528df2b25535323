#pragma once

#include <cstddef>
#include <cstdint>

#include "zipfsketch/freq_model.h"
#include "zipfsketch/hashing.h"

namespace zipfsketch {

// Exact expected errors on tiny instances, by total enumeration over the
// truly-random hash model. These do not touch HashFamily or the sketch
// classes and serve as ground truth for the Monte Carlo paths.

/// Per-row enumeration must stay below this many joint assignments.
inline constexpr std::uint64_t kMaxRowAssignments = 10'000'000;
/// Cross-row combination must stay below this many support tuples.
inline constexpr std::uint64_t kMaxRowCombinations = 100'000'000;
/// n^S bound for detection-probability enumeration.
inline constexpr std::uint64_t kMaxPrefixSequences = 10'000'000;

struct TinyInstance {
  FrequencyVector truth;
  std::uint32_t rows = 1;
  std::uint32_t width = 2;
};

enum class SignModel {
  kRandom,
  /// Every sign fixed to +1; Count-Sketch then degenerates to Count-Min rows.
  kAllPositive,
};

/// E|min_l C[l, h_l(i)] - f_i| averaged over all width^(rows*n) joint hash
/// assignments. Throws GuardError when the enumeration is too large.
long double exact_cm_error(const TinyInstance& inst, ItemId item);

/// E|median_l s_l(i) C[l, h_l(i)] - f_i| averaged over all hash and sign
/// assignments. Throws std::invalid_argument for even rows and GuardError
/// when the enumeration is too large.
long double exact_cs_error(const TinyInstance& inst, ItemId item,
                           SignModel signs = SignModel::kRandom);

/// Pr[item ranks within the top `table_size` of an i.i.d. prefix of
/// `prefix_length` draws], ranking all n items (zero counts included) by
/// (count desc, id asc). Throws GuardError when n^S exceeds the bound.
long double exact_detection_probability(const FrequencyVector& truth,
                                        std::size_t prefix_length,
                                        std::size_t table_size, ItemId item);

}  // namespace zipfsketch
