#include "zipfsketch/scaling_fit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "zipfsketch/errors.h"

namespace zipfsketch {

Predictor make_predictor(const std::string& name, std::size_t n, std::uint32_t rows,
                         double alpha) {
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(rows);
  if (name == "none") return {};
  if (name == "cm") {
    if (rows == 1) return {"log(n)/B", [nn](double b) { return std::log(nn) / b; }};
    return {"k*log(k*n/B)/B", [nn, k](double b) { return k * std::log(k * nn / b) / b; }};
  }
  if (name == "cs") {
    if (rows == 1) return {"log(B)/B", [](double b) { return std::log(b) / b; }};
    return {"sqrt(k)/B", [k](double b) { return std::sqrt(k) / b; }};
  }
  if (name == "lcm") {
    return {"log(n/B)^2/(B*log(n))", [nn](double b) {
              const double l = std::log(nn / b);
              return l * l / (b * std::log(nn));
            }};
  }
  if (name == "lcs") {
    return {"log(n/B)/(B*log(n))",
            [nn](double b) { return std::log(nn / b) / (b * std::log(nn)); }};
  }
  if (name == "cm-alpha") {
    return {"k*n^(2-2a)/B",
            [nn, k, alpha](double b) { return k * std::pow(nn, 2.0 - 2.0 * alpha) / b; }};
  }
  if (name == "lcm-alpha") {
    if (alpha > 1.0) {
      return {"B^(1-2a)", [alpha](double b) { return std::pow(b, 1.0 - 2.0 * alpha); }};
    }
    return {"n^(2-2a)/B", [nn, alpha](double b) { return std::pow(nn, 2.0 - 2.0 * alpha) / b; }};
  }
  throw std::invalid_argument("unknown predictor '" + name + "'");
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, const Predictor& predictor) {
  if (points.size() < 4) {
    throw std::invalid_argument("fit: need at least 4 budget points, got " +
                                std::to_string(points.size()));
  }
  ScalingFit fit;
  fit.points = points.size();
  fit.predictor = predictor.description;
  fit.ratio_min = std::numeric_limits<double>::infinity();
  fit.ratio_max = 0.0;

  std::vector<double> xs, ys;
  for (const ScalingPoint& p : points) {
    if (!(p.budget > 0.0) || !(p.error > 0.0)) {
      throw DataError("fit: budgets and errors must be positive for a log-log fit");
    }
    const double g = predictor.value(p.budget);
    if (!(g > 0.0)) throw DataError("fit: predictor must be positive at B=" + std::to_string(p.budget));
    const double ratio = p.error / g;
    fit.ratio_min = std::min(fit.ratio_min, ratio);
    fit.ratio_max = std::max(fit.ratio_max, ratio);
    xs.push_back(std::log(p.budget));
    ys.push_back(std::log(p.error));
  }

  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DataError("fit: all budgets are equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

std::vector<ScalingPoint> scaling_points(const ErrorReport& report, Algorithm algorithm,
                                         std::uint32_t rows) {
  std::vector<ScalingPoint> out;
  for (const ReportRow& r : report.rows) {
    if (r.algorithm == algorithm && r.rows == rows) {
      out.push_back({static_cast<double>(r.budget), r.mean_err});
    }
  }
  return out;
}

}  // namespace zipfsketch
