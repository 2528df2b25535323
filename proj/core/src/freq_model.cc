#include "zipfsketch/freq_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zipfsketch {

namespace {

void check_zipf_args(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("zipf: n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("zipf: alpha must be finite and > 0");
  }
}

// Kahan-Babuska summation, iterating from the tail (smallest terms first).
double sum_reversed(std::span<const double> values) {
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    const long double v = *it;
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return static_cast<double>(sum + comp);
}

}  // namespace

FrequencyVector::FrequencyVector(std::size_t n, double alpha) : alpha_(alpha) {
  check_zipf_args(n, alpha);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights_[i] = std::pow(static_cast<double>(i + 1), -alpha);
  }
  total_ = sum_reversed(weights_);
}

FrequencyVector zipf_frequencies(std::size_t n, double alpha) {
  return FrequencyVector(n, alpha);
}

double generalized_harmonic(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("harmonic: n must be >= 1");
  if (!std::isfinite(alpha)) throw std::invalid_argument("harmonic: alpha must be finite");
  long double sum = 0.0L;
  for (std::size_t i = n; i >= 1; --i) {
    sum += std::pow(static_cast<long double>(i), -static_cast<long double>(alpha));
  }
  return static_cast<double>(sum);
}

std::string_view to_string(ErrorMetric metric) noexcept {
  switch (metric) {
    case ErrorMetric::kUnnormalized:
      return "raw";
    case ErrorMetric::kNormalizedByTotal:
      return "normalized";
  }
  return "raw";
}

ErrorMetric parse_error_metric(std::string_view text) {
  if (text == "raw" || text == "unnormalized") return ErrorMetric::kUnnormalized;
  if (text == "normalized") return ErrorMetric::kNormalizedByTotal;
  throw std::invalid_argument("unknown metric mode '" + std::string(text) + "'");
}

double weighted_error(const FrequencyVector& truth,
                      std::span<const double> estimates, ErrorMetric metric) {
  const auto weights = truth.weights();
  if (estimates.size() != weights.size()) {
    throw std::invalid_argument("weighted_error: expected " +
                                std::to_string(weights.size()) +
                                " estimates, got " +
                                std::to_string(estimates.size()));
  }
  long double sum = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += static_cast<long double>(weights[i]) *
           std::fabs(static_cast<long double>(estimates[i]) - weights[i]);
  }
  double err = static_cast<double>(sum);
  if (metric == ErrorMetric::kNormalizedByTotal) err /= truth.total();
  return err;
}

StreamSampler::StreamSampler(const FrequencyVector& truth) {
  const auto weights = truth.weights();
  cdf_.resize(weights.size());
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double y = weights[i] - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    cdf_[i] = static_cast<double>(sum);
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

ItemId StreamSampler::from_unit(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return static_cast<ItemId>(std::min(idx, cdf_.size() - 1) + 1);
}

std::vector<ItemId> sample_stream(const FrequencyVector& truth, std::size_t m,
                                  std::uint64_t seed) {
  const StreamSampler sampler(truth);
  std::mt19937_64 engine(seed);
  std::vector<ItemId> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.push_back(sampler(engine));
  return out;
}

}  // namespace zipfsketch
