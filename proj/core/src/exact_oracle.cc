#include "zipfsketch/exact_oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zipfsketch/errors.h"

namespace zipfsketch {

namespace {

struct Atom {
  long double value;
  long double prob;
};

using RowDistribution = std::vector<Atom>;

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit,
                          const char* what) {
  std::uint64_t result = 1;
  for (std::uint64_t e = 0; e < exp; ++e) {
    if (base != 0 && result > limit / base) {
      throw GuardError(std::string(what) + ": enumeration exceeds guard of " +
                       std::to_string(limit));
    }
    result *= base;
  }
  return result;
}

void check_instance(const TinyInstance& inst, ItemId item) {
  if (inst.rows == 0 || inst.width == 0) {
    throw std::invalid_argument("exact oracle: rows and width must be >= 1");
  }
  if (item == 0 || item > inst.truth.size()) {
    throw std::invalid_argument("exact oracle: query item out of range");
  }
}

RowDistribution merge_atoms(RowDistribution atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  RowDistribution merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

// Distribution of the query item's (sign-corrected) counter in one row,
// enumerating the bucket of every item and, with signs, the sign of every item.
RowDistribution row_distribution(const FrequencyVector& truth, std::uint32_t width,
                                 ItemId item, bool with_signs) {
  const std::size_t n = truth.size();
  const std::uint64_t hash_count = checked_pow(width, n, kMaxRowAssignments, "exact oracle");
  const std::uint64_t sign_count = with_signs ? checked_pow(2, n, kMaxRowAssignments, "exact oracle") : 1;
  if (hash_count > kMaxRowAssignments / sign_count) {
    throw GuardError("exact oracle: per-row enumeration exceeds guard");
  }
  const long double prob = 1.0L / (static_cast<long double>(hash_count) * sign_count);
  const auto weights = truth.weights();
  const std::size_t q = item - 1;

  RowDistribution atoms;
  atoms.reserve(hash_count * sign_count);
  std::vector<std::uint32_t> bucket(n, 0);
  for (std::uint64_t h = 0; h < hash_count; ++h) {
    std::uint64_t code = h;
    for (std::size_t j = 0; j < n; ++j) {
      bucket[j] = static_cast<std::uint32_t>(code % width);
      code /= width;
    }
    for (std::uint64_t s = 0; s < sign_count; ++s) {
      auto sign = [&](std::size_t j) { return with_signs && ((s >> j) & 1) ? -1.0L : 1.0L; };
      long double counter = 0.0L;
      for (std::size_t j = 0; j < n; ++j) {
        if (bucket[j] == bucket[q]) counter += sign(j) * weights[j];
      }
      atoms.push_back({sign(q) * counter, prob});
    }
  }
  return merge_atoms(std::move(atoms));
}

// E|combine(row values) - f| with rows i.i.d. from `dist`.
long double combine_rows(const RowDistribution& dist, std::uint32_t rows, long double truth,
                         const std::function<long double(std::vector<long double>&)>& combine) {
  checked_pow(dist.size(), rows, kMaxRowCombinations, "exact oracle");
  std::vector<long double> values(rows);
  std::vector<long double> scratch(rows);
  long double expected = 0.0L;
  std::function<void(std::uint32_t, long double)> recurse = [&](std::uint32_t r, long double p) {
    if (r == rows) {
      scratch = values;
      expected += p * std::fabs(combine(scratch) - truth);
      return;
    }
    for (const Atom& a : dist) {
      values[r] = a.value;
      recurse(r + 1, p * a.prob);
    }
  };
  recurse(0, 1.0L);
  return expected;
}

long double lgamma_factorial(std::size_t k) { return std::lgamma(static_cast<long double>(k) + 1.0L); }

}  // namespace

long double exact_cm_error(const TinyInstance& inst, ItemId item) {
  check_instance(inst, item);
  const RowDistribution dist = row_distribution(inst.truth, inst.width, item, false);
  return combine_rows(dist, inst.rows, inst.truth(item), [](std::vector<long double>& v) {
    return *std::min_element(v.begin(), v.end());
  });
}

long double exact_cs_error(const TinyInstance& inst, ItemId item, SignModel signs) {
  check_instance(inst, item);
  if (inst.rows % 2 == 0) throw std::invalid_argument("exact oracle: count-sketch rows must be odd");
  const RowDistribution dist =
      row_distribution(inst.truth, inst.width, item, signs == SignModel::kRandom);
  return combine_rows(dist, inst.rows, inst.truth(item), [](std::vector<long double>& v) {
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  });
}

long double exact_detection_probability(const FrequencyVector& truth,
                                        std::size_t prefix_length,
                                        std::size_t table_size, ItemId item) {
  const std::size_t n = truth.size();
  if (item == 0 || item > n) throw std::invalid_argument("detection probability: item out of range");
  if (table_size == 0) throw std::invalid_argument("detection probability: T must be >= 1");
  checked_pow(n, prefix_length, kMaxPrefixSequences, "detection probability");

  std::vector<long double> log_p(n);
  for (std::size_t j = 0; j < n; ++j) {
    log_p[j] = std::log(static_cast<long double>(truth.weights()[j]) / truth.total());
  }

  // Enumerate count vectors (compositions of S into n parts) weighted by the
  // multinomial probability.
  const std::size_t q = item - 1;
  std::vector<std::size_t> counts(n, 0);
  long double detected = 0.0L;
  const long double log_s_fact = lgamma_factorial(prefix_length);
  std::function<void(std::size_t, std::size_t, long double)> recurse =
      [&](std::size_t j, std::size_t remaining, long double log_w) {
        if (j + 1 == n) {
          counts[j] = remaining;
          const long double lw = log_w - lgamma_factorial(remaining) +
                                 static_cast<long double>(remaining) * log_p[j];
          std::size_t rank = 1;
          for (std::size_t other = 0; other < n; ++other) {
            if (other == q) continue;
            if (counts[other] > counts[q] || (counts[other] == counts[q] && other < q)) ++rank;
          }
          if (rank <= table_size) detected += std::exp(log_s_fact + lw);
          return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
          counts[j] = c;
          recurse(j + 1, remaining - c,
                  log_w - lgamma_factorial(c) + static_cast<long double>(c) * log_p[j]);
        }
      };
  recurse(0, prefix_length, 0.0L);
  return std::min(detected, 1.0L);
}

}  // namespace zipfsketch
