#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "zipfsketch/errors.h"
#include "zipfsketch/report_io.h"
#include "zipfsketch/scaling_fit.h"
#include "zipfsketch/svg_plot.h"

using namespace zipfsketch;

namespace {

ErrorReport sample_report() {
  ExperimentConfig c;
  c.n = 1000;
  c.algorithm = Algorithm::kLearnedCountMin;
  c.budgets = {200, 400, 800};
  c.trials = 4;
  return run_sweep(c, 1);
}

}  // namespace

TEST(Csv, RoundTrip) {
  const ErrorReport r = sample_report();
  std::stringstream s;
  write_report_csv(r, s);
  const std::string text = s.str();
  EXPECT_NE(text.find("# seed=42"), std::string::npos);
  EXPECT_NE(text.find("algorithm,k,B,B_h,width,alpha,metric_mode,trials,mean_err,std_err,ci95,"
                      "overflow_events,oracle"),
            std::string::npos);
  const ErrorReport back = read_report_csv(s);
  EXPECT_EQ(back.metadata, r.metadata);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].budget, r.rows[i].budget);
    EXPECT_EQ(back.rows[i].algorithm, r.rows[i].algorithm);
    EXPECT_EQ(back.rows[i].oracle, r.rows[i].oracle);
    EXPECT_NEAR(back.rows[i].mean_err, r.rows[i].mean_err, 1e-8 * r.rows[i].mean_err);
  }
  std::stringstream again;
  write_report_csv(back, again);
  EXPECT_EQ(again.str(), text);
}

TEST(Csv, MalformedInput) {
  std::stringstream missing("# a=b\nalgorithm,k\nCM,1\n");
  EXPECT_THROW(read_report_csv(missing), DataError);
  std::stringstream empty("");
  EXPECT_THROW(read_report_csv(empty), DataError);
  std::stringstream bad_value(
      "algorithm,k,B,B_h,width,alpha,metric_mode,trials,mean_err,std_err,ci95,overflow_events,"
      "oracle\nCM,one,1000,0,1000,1,raw,5,0.1,0.01,0.01,0,none\n");
  EXPECT_THROW(read_report_csv(bad_value), DataError);
}

TEST(Json, RoundTrip) {
  const ErrorReport r = sample_report();
  const std::string text = report_to_json(r);
  const ErrorReport back = report_from_json(text);
  EXPECT_EQ(back.metadata, r.metadata);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].mean_err, quantize9(r.rows[i].mean_err));
    EXPECT_EQ(back.rows[i].width, r.rows[i].width);
  }
  EXPECT_EQ(report_to_json(back), text);
  EXPECT_THROW(report_from_json("{not json"), DataError);
  EXPECT_THROW(report_from_json("{\"rows\": 3}"), DataError);
}

TEST(Formatting, NineSignificantDigits) {
  EXPECT_EQ(format_float(1.0 / 3), "0.333333333");
  EXPECT_EQ(format_float(0.25), "0.25");
  EXPECT_EQ(format_float(1.0), "1");
  EXPECT_EQ(quantize9(0.1234567891234), 0.123456789);
}

TEST(TableCsv, WideLayout) {
  TableConfig c;
  c.n = 1000;
  c.budgets = {300, 600};
  c.trials = 2;
  std::stringstream s;
  write_table_csv(reproduce_table(c, 1), s);
  std::string line, header;
  std::size_t data = 0;
  while (std::getline(s, line)) {
    if (line.starts_with("#")) continue;
    if (header.empty()) {
      header = line;
      continue;
    }
    ++data;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(header, "B,CM k=1,CM k=2,L-CM,CS k=1,CS k=3,L-CS");
  EXPECT_EQ(data, 2u);
}

TEST(Svg, DeterministicAndWellFormed) {
  const ErrorReport r = sample_report();
  const std::string a = report_svg(r);
  EXPECT_EQ(a, report_svg(r));
  EXPECT_TRUE(a.starts_with("<svg") || a.starts_with("<?xml"));
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("<polyline"), std::string::npos);
}

TEST(Svg, SinglePointHasNoLine) {
  SvgSeries s{"one", {1000}, {0.5}, {}, false};
  const std::vector<SvgSeries> v = {s};
  const std::string svg = render_svg(v, {});
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(Svg, Errors) {
  const std::vector<SvgSeries> none;
  EXPECT_THROW(render_svg(none, {}), std::invalid_argument);
  const std::vector<SvgSeries> bad = {SvgSeries{"z", {1, 2}, {0.0, 1.0}, {}, false}};
  EXPECT_THROW(render_svg(bad, {}), DataError);
}

TEST(Fit, RecoversExactPowerLaw) {
  std::vector<ScalingPoint> pts;
  for (const double b : {250.0, 500.0, 1000.0, 2000.0}) pts.push_back({b, 3.0 * std::pow(b, -2.0)});
  const ScalingFit fit = fit_scaling(pts);
  EXPECT_NEAR(fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.points, 4u);
}

TEST(Fit, PredictorRatioBand) {
  std::vector<ScalingPoint> pts;
  for (const double b : {500.0, 1000.0, 2000.0, 4000.0}) pts.push_back({b, 7.0 / b});
  const Predictor p{"1/B", [](double b) { return 1.0 / b; }};
  const ScalingFit fit = fit_scaling(pts, p);
  EXPECT_NEAR(fit.ratio_min, 7.0, 1e-12);
  EXPECT_NEAR(fit.ratio_band(), 1.0, 1e-12);
  EXPECT_EQ(fit.predictor, "1/B");
}

TEST(Fit, Guards) {
  const std::vector<ScalingPoint> three = {{1, 1}, {2, 1}, {3, 1}};
  EXPECT_THROW(fit_scaling(three), std::invalid_argument);
  const std::vector<ScalingPoint> zero = {{1, 1}, {2, 0}, {3, 1}, {4, 1}};
  EXPECT_THROW(fit_scaling(zero), DataError);
  EXPECT_THROW(make_predictor("bogus", 100, 1, 1.0), std::invalid_argument);
}

TEST(Fit, PointsFromReport) {
  const ErrorReport r = sample_report();
  const auto pts = scaling_points(r, Algorithm::kLearnedCountMin, 1);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[2].budget, 800.0);
  EXPECT_TRUE(scaling_points(r, Algorithm::kCountMin, 1).empty());
}
