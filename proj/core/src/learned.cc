#include "zipfsketch/learned.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace zipfsketch {

namespace {

constexpr std::uint64_t kFlipStream = 0x666c6970;  // "flip"

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string describe(const OracleSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PerfectOracle& o) { return "perfect(bh=" + std::to_string(o.heavy_count) + ")"; },
          [](const NoisyOracle& o) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "noisy(bh=%zu,delta=%.9g,seed=%llu)", o.heavy_count,
                          o.delta, static_cast<unsigned long long>(o.seed));
            return std::string(buf);
          },
          [](const LookupOracle& o) {
            return "lookup(S=" + std::to_string(o.prefix_length) +
                   ",T=" + std::to_string(o.table_size) + ",seed=" + std::to_string(o.seed) + ")";
          },
      },
      spec);
}

LookupTable build_lookup_table(const FrequencyVector& truth,
                               std::size_t prefix_length,
                               std::size_t table_size, std::uint64_t seed) {
  if (table_size == 0) throw std::invalid_argument("lookup table: T must be >= 1");

  const StreamSampler sampler(truth);
  std::mt19937_64 engine(seed);
  std::vector<std::uint64_t> counts(truth.size() + 1, 0);
  std::vector<ItemId> seen;
  for (std::size_t j = 0; j < prefix_length; ++j) {
    const ItemId item = sampler(engine);
    if (counts[item]++ == 0) seen.push_back(item);
  }

  const std::size_t keep = std::min(table_size, seen.size());
  auto heavier = [&](ItemId a, ItemId b) {
    return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
  };
  std::partial_sort(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(keep), seen.end(),
                    heavier);

  LookupTable table;
  table.sample_counts.reserve(seen.size());
  for (const ItemId item : seen) table.sample_counts.emplace(item, counts[item]);
  table.heavy_items.assign(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(keep));
  table.heavy_set.insert(table.heavy_items.begin(), table.heavy_items.end());
  return table;
}

bool noisy_flip(std::uint64_t seed, double delta, ItemId item) {
  const std::uint64_t key = detail::derive_seed(seed, 0, kFlipStream);
  return detail::unit_interval(detail::keyed_word(key, item)) < delta;
}

HeavyHitterOracle::HeavyHitterOracle(OracleSpec spec) : spec_(std::move(spec)) {
  if (const auto* noisy = std::get_if<NoisyOracle>(&spec_)) {
    if (!(noisy->delta >= 0.0 && noisy->delta <= 1.0)) {
      throw std::invalid_argument("noisy oracle: delta must lie in [0, 1]");
    }
  }
  if (const auto* lookup = std::get_if<LookupOracle>(&spec_)) {
    if (lookup->table_size == 0) throw std::invalid_argument("lookup oracle: T must be >= 1");
  }
}

void HeavyHitterOracle::build(const FrequencyVector& truth) {
  std::visit(Overloaded{
                 [&](const PerfectOracle& o) {
                   if (o.heavy_count > truth.size()) {
                     throw std::invalid_argument("perfect oracle: B_h exceeds n");
                   }
                 },
                 [&](const NoisyOracle& o) {
                   if (o.heavy_count > truth.size()) {
                     throw std::invalid_argument("noisy oracle: B_h exceeds n");
                   }
                 },
                 [&](const LookupOracle& o) {
                   if (o.table_size > truth.size()) {
                     throw std::invalid_argument("lookup oracle: T exceeds n");
                   }
                   table_ = build_lookup_table(truth, o.prefix_length, o.table_size, o.seed);
                 },
             },
             spec_);
}

bool HeavyHitterOracle::ready() const noexcept {
  return !std::holds_alternative<LookupOracle>(spec_) || table_.has_value();
}

Prediction HeavyHitterOracle::classify(ItemId item) const {
  return std::visit(
      Overloaded{
          [&](const PerfectOracle& o) {
            return item <= o.heavy_count ? Prediction::kHeavy : Prediction::kLight;
          },
          [&](const NoisyOracle& o) {
            const bool heavy = item <= o.heavy_count;
            return heavy != noisy_flip(o.seed, o.delta, item) ? Prediction::kHeavy
                                                               : Prediction::kLight;
          },
          [&](const LookupOracle&) {
            if (!table_) throw StateError("lookup oracle: classify() before build()");
            return table_->contains(item) ? Prediction::kHeavy : Prediction::kLight;
          },
      },
      spec_);
}

std::size_t HeavyHitterOracle::capacity() const noexcept {
  return std::visit(Overloaded{
                        [](const PerfectOracle& o) { return o.heavy_count; },
                        [](const NoisyOracle& o) { return o.heavy_count; },
                        [](const LookupOracle& o) { return o.table_size; },
                    },
                    spec_);
}

std::uint32_t budget_split(std::size_t total_buckets, std::size_t heavy_slots,
                           std::uint32_t heavy_bucket_cost, std::uint32_t rows) {
  if (rows == 0) throw std::invalid_argument("budget split: rows must be >= 1");
  const std::size_t reserved = heavy_slots * heavy_bucket_cost;
  if (total_buckets < reserved + rows) {
    throw std::invalid_argument("budget split: B=" + std::to_string(total_buckets) +
                                " leaves no inner width after " + std::to_string(reserved) +
                                " heavy buckets and " + std::to_string(rows) + " rows");
  }
  return static_cast<std::uint32_t>((total_buckets - reserved) / rows);
}

}  // namespace zipfsketch
