#include "zipfsketch/svg_plot.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "zipfsketch/errors.h"
#include "zipfsketch/report_io.h"

namespace zipfsketch {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr double kMarginLeft = 80, kMarginRight = 190, kMarginTop = 40, kMarginBottom = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0, hi = 1;
  double pix_lo = 0, pix_hi = 1;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double map(double v) const {
    const double t = (transform(v) - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

Axis make_axis(const std::vector<double>& values, bool log, double pix_lo, double pix_hi) {
  Axis a;
  a.log = log;
  a.pix_lo = pix_lo;
  a.pix_hi = pix_hi;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : values) {
    if (log && !(v > 0.0)) throw DataError("svg: nonpositive value on a log axis");
    lo = std::min(lo, a.transform(v));
    hi = std::max(hi, a.transform(v));
  }
  if (hi - lo < 1e-12) {
    const double pad = log ? 0.5 : std::max(std::fabs(lo) * 0.1, 1.0);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg(std::span<const SvgSeries> series, const SvgOptions& options) {
  std::vector<double> xs, ys;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("svg: x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xs.push_back(s.x[i]);
      ys.push_back(s.y[i]);
      if (!s.whisker.empty()) {
        const double lo = s.y[i] - s.whisker[i];
        if (!options.log_y || lo > 0.0) ys.push_back(lo);
        ys.push_back(s.y[i] + s.whisker[i]);
      }
    }
  }
  if (xs.empty()) throw std::invalid_argument("svg: nothing to plot");

  const double w = options.width, h = options.height;
  const Axis ax = make_axis(xs, options.log_x, kMarginLeft, w - kMarginRight);
  const Axis ay = make_axis(ys, options.log_y, h - kMarginBottom, kMarginTop);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out += "<text x=\"" + num(w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(options.title) + "</text>\n";
  }

  // Frame and ticks.
  out += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) + "\" width=\"" +
         num(w - kMarginLeft - kMarginRight) + "\" height=\"" +
         num(h - kMarginTop - kMarginBottom) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double fx = ax.lo + (ax.hi - ax.lo) * t / kTicks;
    const double vx = ax.log ? std::pow(10.0, fx) : fx;
    const double px = ax.map(vx);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(h - kMarginBottom) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(h - kMarginBottom + 5) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(h - kMarginBottom + 18) +
           "\" text-anchor=\"middle\">" + tick_label(vx) + "</text>\n";
    const double fy = ay.lo + (ay.hi - ay.lo) * t / kTicks;
    const double vy = ay.log ? std::pow(10.0, fy) : fy;
    const double py = ay.map(vy);
    out += "<line x1=\"" + num(kMarginLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(kMarginLeft) + "\" y2=\"" + num(py) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + num(kMarginLeft - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\">" + tick_label(vy) + "</text>\n";
  }
  out += "<text x=\"" + num((kMarginLeft + w - kMarginRight) / 2) + "\" y=\"" + num(h - 14) +
         "\" text-anchor=\"middle\">" + escape(options.x_label) +
         (options.log_x ? " (log)" : "") + "</text>\n";
  out += "<text x=\"18\" y=\"" + num((kMarginTop + h - kMarginBottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num((kMarginTop + h - kMarginBottom) / 2) + ")\">" + escape(options.y_label) +
         (options.log_y ? " (log)" : "") + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    const char* color = kPalette[si % kPalette.size()];
    out += "<g stroke=\"" + std::string(color) + "\" fill=\"" + color + "\">\n";
    if (s.x.size() >= 2) {
      out += "<polyline fill=\"none\" stroke-width=\"1.6\"" +
             std::string(s.line_only ? " stroke-dasharray=\"6 4\"" : "") + " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) out += ' ';
        out += num(ax.map(s.x[i])) + "," + num(ay.map(s.y[i]));
      }
      out += "\"/>\n";
    }
    if (!s.line_only) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double px = ax.map(s.x[i]);
        const double py = ay.map(s.y[i]);
        if (!s.whisker.empty() && s.whisker[i] > 0.0) {
          const double lo = s.y[i] - s.whisker[i];
          const double py_lo = (options.log_y && lo <= 0.0) ? ay.pix_lo : ay.map(lo);
          const double py_hi = ay.map(s.y[i] + s.whisker[i]);
          out += "<line x1=\"" + num(px) + "\" y1=\"" + num(py_lo) + "\" x2=\"" + num(px) +
                 "\" y2=\"" + num(py_hi) + "\"/>\n";
        }
        out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"2.8\"/>\n";
      }
    }
    out += "</g>\n";
    const double ly = kMarginTop + 14 + 18.0 * static_cast<double>(si);
    const double lx = w - kMarginRight + 14;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 22) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 28) + "\" y=\"" + num(ly) + "\">" + escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<SvgSeries> report_series(const ErrorReport& report) {
  std::vector<SvgSeries> series;
  std::map<std::string, std::size_t> index;
  for (const ReportRow& r : report.rows) {
    std::string label = std::string(to_string(r.algorithm)) + " k=" + std::to_string(r.rows);
    if (r.oracle != "none" && r.oracle != "perfect") label += " " + r.oracle;
    auto [it, inserted] = index.emplace(label, series.size());
    if (inserted) series.push_back(SvgSeries{label, {}, {}, {}, false});
    SvgSeries& s = series[it->second];
    s.x.push_back(static_cast<double>(r.budget));
    s.y.push_back(r.mean_err);
    s.whisker.push_back(r.ci95);
  }
  return series;
}

std::string report_svg(const ErrorReport& report, const SvgOptions& options) {
  if (report.rows.empty()) throw std::invalid_argument("svg: empty report");
  const auto series = report_series(report);
  return render_svg(series, options);
}

std::string fit_svg(std::span<const ScalingPoint> points, const ScalingFit& fit,
                    const SvgOptions& options) {
  if (points.empty()) throw std::invalid_argument("svg: no fit points");
  SvgSeries measured{"measured", {}, {}, {}, false};
  SvgSeries fitted{"fit slope " + format_float(fit.slope), {}, {}, {}, true};
  for (const ScalingPoint& p : points) {
    measured.x.push_back(p.budget);
    measured.y.push_back(p.error);
    fitted.x.push_back(p.budget);
    fitted.y.push_back(std::exp(fit.intercept + fit.slope * std::log(p.budget)));
  }
  const std::vector<SvgSeries> series = {measured, fitted};
  SvgOptions opts = options;
  opts.log_x = true;
  opts.log_y = true;
  return render_svg(series, opts);
}

void emit_svg(const ErrorReport& report, const std::string& path, const SvgOptions& options) {
  write_file(path, report_svg(report, options));
}

}  // namespace zipfsketch
