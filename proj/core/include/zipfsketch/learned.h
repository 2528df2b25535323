#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "zipfsketch/errors.h"
#include "zipfsketch/freq_model.h"
#include "zipfsketch/hashing.h"
#include "zipfsketch/sketches.h"

namespace zipfsketch {

/// Classifies exactly items 1..heavy_count as heavy.
struct PerfectOracle {
  std::size_t heavy_count = 0;
};

/// The perfect answer, flipped independently per item with probability delta.
struct NoisyOracle {
  std::size_t heavy_count = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

/// Heavy iff among the table_size most frequent items of an independent
/// i.i.d. prefix of prefix_length draws.
struct LookupOracle {
  std::size_t prefix_length = 0;
  std::size_t table_size = 1;
  std::uint64_t seed = 0;
};

using OracleSpec = std::variant<PerfectOracle, NoisyOracle, LookupOracle>;

std::string describe(const OracleSpec& spec);

struct LookupTable {
  /// Ranked by (sample count desc, item id asc).
  std::vector<ItemId> heavy_items;
  std::unordered_set<ItemId> heavy_set;
  std::unordered_map<ItemId, std::uint64_t> sample_counts;

  bool contains(ItemId item) const { return heavy_set.contains(item); }
};

/// Draws `prefix_length` items with sample_stream(truth, ., seed) and keeps the
/// top `table_size` sampled items, ties broken toward the smaller item id.
/// Throws std::invalid_argument for table_size == 0.
LookupTable build_lookup_table(const FrequencyVector& truth,
                               std::size_t prefix_length,
                               std::size_t table_size, std::uint64_t seed);

enum class Prediction { kLight, kHeavy };

class HeavyHitterOracle {
 public:
  /// Validates delta in [0, 1] and table_size >= 1.
  explicit HeavyHitterOracle(OracleSpec spec);

  /// Checks the spec against the universe and, for lookup oracles, samples
  /// the prefix and builds the table.
  void build(const FrequencyVector& truth);

  bool ready() const noexcept;

  /// Throws StateError for a lookup oracle that has not been built.
  Prediction classify(ItemId item) const;

  /// Exact slots a learned sketch reserves: B_h, or T for lookup.
  std::size_t capacity() const noexcept;

  const OracleSpec& spec() const noexcept { return spec_; }
  const LookupTable* lookup_table() const noexcept {
    return table_ ? &*table_ : nullptr;
  }

 private:
  OracleSpec spec_;
  std::optional<LookupTable> table_;
};

/// Whether a noisy oracle with this seed flips the perfect answer for item.
bool noisy_flip(std::uint64_t seed, double delta, ItemId item);

/// What to do with a predicted-heavy item once every exact slot is taken.
enum class OverflowPolicy {
  /// First come, first served; the surplus is sketched and counted.
  kRouteToSketch,
  /// Throw CapacityError.
  kThrow,
};

/// Inner width floor((B - cost * B_h) / k).
/// Throws std::invalid_argument when the width would be < 1.
std::uint32_t budget_split(std::size_t total_buckets, std::size_t heavy_slots,
                           std::uint32_t heavy_bucket_cost, std::uint32_t rows);

/// Items predicted heavy are counted exactly in a private slot; the rest go
/// to the inner sketch.
template <PointSketch Inner>
class LearnedSketch {
 public:
  LearnedSketch(HeavyHitterOracle oracle, Inner inner,
                std::uint32_t heavy_bucket_cost = 2,
                OverflowPolicy policy = OverflowPolicy::kRouteToSketch)
      : oracle_(std::move(oracle)),
        inner_(std::move(inner)),
        heavy_bucket_cost_(heavy_bucket_cost),
        policy_(policy) {
    if (!oracle_.ready()) throw StateError("learned sketch: oracle is not built");
  }

  void insert(ItemId item, double weight) {
    if (oracle_.classify(item) == Prediction::kLight || overflowed_.contains(item)) {
      inner_.insert(item, weight);
      return;
    }
    if (auto it = heavy_store_.find(item); it != heavy_store_.end()) {
      it->second += weight;
      return;
    }
    if (heavy_store_.size() < oracle_.capacity()) {
      heavy_store_.emplace(item, weight);
      return;
    }
    if (policy_ == OverflowPolicy::kThrow) {
      throw CapacityError("learned sketch: all " + std::to_string(oracle_.capacity()) +
                          " heavy slots in use, cannot place item " + std::to_string(item));
    }
    overflowed_.insert(item);
    inner_.insert(item, weight);
  }

  double estimate(ItemId item) const {
    if (oracle_.classify(item) == Prediction::kLight || overflowed_.contains(item)) {
      return inner_.estimate(item);
    }
    const auto it = heavy_store_.find(item);
    return it == heavy_store_.end() ? 0.0 : it->second;
  }

  /// Feeds items 1..n in rank order with weight f_i.
  void load(const FrequencyVector& truth) {
    const auto weights = truth.weights();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      insert(static_cast<ItemId>(i + 1), weights[i]);
    }
  }

  /// Predicted-heavy items that found no free slot.
  std::size_t overflow_events() const noexcept { return overflowed_.size(); }

  /// cost * capacity + rows * width.
  std::size_t memory_buckets() const noexcept {
    return std::size_t{heavy_bucket_cost_} * oracle_.capacity() +
           std::size_t{inner_.rows()} * inner_.width();
  }

  const HeavyHitterOracle& oracle() const noexcept { return oracle_; }
  const Inner& inner() const noexcept { return inner_; }
  const std::unordered_map<ItemId, double>& heavy_store() const noexcept {
    return heavy_store_;
  }
  std::uint32_t heavy_bucket_cost() const noexcept { return heavy_bucket_cost_; }

 private:
  HeavyHitterOracle oracle_;
  Inner inner_;
  std::uint32_t heavy_bucket_cost_;
  OverflowPolicy policy_;
  std::unordered_map<ItemId, double> heavy_store_;
  std::unordered_set<ItemId> overflowed_;
};

}  // namespace zipfsketch
