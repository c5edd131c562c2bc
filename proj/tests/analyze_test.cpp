#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fractline/analyze.hpp"
#include "support/test_support.hpp"

using namespace fractline;
namespace ts = testsupport;

namespace {

AnalyzeOptions quick_options(int replicates = 200) {
  AnalyzeOptions opts;
  opts.replicates = replicates;
  return opts;
}

}  // namespace

TEST(Analyze, LogSpiral300ReferenceStatistics) {
  const Polyline spiral = gen_log_spiral(300, 1.0, 0.1759, 6.0 * std::numbers::pi);
  const AnalysisReport r = analyze(spiral, 42, quick_options());
  EXPECT_EQ(r.n_vertices, 300u);
  EXPECT_EQ(r.n_bends, 298u);
  EXPECT_EQ(r.ht_index, 5);
  EXPECT_TRUE(r.is_fractal_def3);
  EXPECT_NEAR(r.alpha, 1.58, 0.15);
  EXPECT_NEAR(r.box_dimension, 0.987, 0.05);
  EXPECT_TRUE(r.flags.empty());
}

TEST(Analyze, HalfCircle250HasHtIndexNearFour) {
  const AnalysisReport r = analyze(gen_half_circle(250, 1.0), 42, quick_options(100));
  EXPECT_NEAR(r.ht_index, 4, 1);
  EXPECT_TRUE(r.is_fractal_def3);
  EXPECT_EQ(r.recurrence_count, r.ht_index - 1);
}

TEST(Analyze, StraightSegmentDegeneratesGracefully) {
  Polyline line;
  for (int i = 0; i < 100; ++i) line.points.push_back({0.1 * i, 0.0});
  const AnalysisReport r = analyze(line, 42);
  EXPECT_EQ(r.n_bends, 0u);
  EXPECT_EQ(r.ht_index, 1);
  EXPECT_FALSE(r.is_fractal_def3);
  EXPECT_TRUE(std::isnan(r.alpha));
  EXPECT_TRUE(std::isnan(r.p));
  EXPECT_NEAR(r.box_dimension, 1.0, 0.02);
}

TEST(Analyze, ThinSamplesAreFlagged) {
  const double tm = 6.0 * std::numbers::pi;
  const AnalysisReport thin =
      analyze(gen_log_spiral(37, 1.0, 0.1759, tm), 42, quick_options(100));
  EXPECT_NE(std::find(thin.flags.begin(), thin.flags.end(), "insufficient_sample"),
            thin.flags.end());
  const AnalysisReport ok =
      analyze(gen_log_spiral(74, 1.0, 0.1759, tm), 42, quick_options(100));
  EXPECT_EQ(std::find(ok.flags.begin(), ok.flags.end(), "insufficient_sample"),
            ok.flags.end());
}

TEST(Analyze, StageErrorsAreTagged) {
  try {
    analyze(Polyline{{{0.0, 0.0}, {1.0, 0.0}}, false}, 42);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("decompose"), std::string::npos);
  }
}

TEST(Analyze, ReportEmbedsParameterRecord) {
  AnalyzeOptions opts = quick_options(100);
  opts.curve_id = "spiral";
  const AnalysisReport r =
      analyze(gen_log_spiral(74, 1.0, 0.1759, 6.0 * std::numbers::pi), 9, opts);
  EXPECT_EQ(r.curve_id, "spiral");
  EXPECT_EQ(r.seed, 9u);
  const auto has = [&r](const std::string& key, const std::string& value) {
    for (const auto& [k, v] : r.parameters)
      if (k == key) return v == value;
    return false;
  };
  EXPECT_TRUE(has("seed", "9"));
  EXPECT_TRUE(has("replicates", "100"));
  EXPECT_TRUE(has("metric", "perpendicular-distance"));
  EXPECT_TRUE(has("box_levels", "10"));
}

TEST(Analyze, TriangleAreaMetricIsSelectable) {
  AnalyzeOptions opts = quick_options(100);
  opts.metric = BendMetric::TriangleArea;
  const AnalysisReport r = analyze(gen_half_circle(250, 1.0), 42, opts);
  EXPECT_GE(r.ht_index, 3);  // scaling survives the metric swap
}
