#pragma once

#include <span>
#include <string>
#include <vector>

#include "zipfsketch/experiments.h"
#include "zipfsketch/scaling_fit.h"

namespace zipfsketch {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Optional symmetric whiskers (same length as y, or empty).
  std::vector<double> whisker;
  /// Draw without markers (used for fitted lines).
  bool line_only = false;
};

struct SvgOptions {
  std::string title;
  std::string x_label = "B (total buckets)";
  std::string y_label = "weighted error";
  bool log_x = false;
  bool log_y = true;
  int width = 820;
  int height = 520;
};

/// Standalone SVG document; byte-identical for identical input.
/// Throws std::invalid_argument when there are no points, and DataError when
/// a log axis receives a nonpositive coordinate.
std::string render_svg(std::span<const SvgSeries> series, const SvgOptions& options);

/// One series per (algorithm, k, oracle), in first-appearance order, with
/// 95% CI whiskers.
std::vector<SvgSeries> report_series(const ErrorReport& report);

std::string report_svg(const ErrorReport& report, const SvgOptions& options = {});

/// Measured points plus the fitted power law.
std::string fit_svg(std::span<const ScalingPoint> points, const ScalingFit& fit,
                    const SvgOptions& options = {});

void emit_svg(const ErrorReport& report, const std::string& path,
              const SvgOptions& options = {});

}  // namespace zipfsketch
