#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fractline/bends.hpp"
#include "fractline/boxcount.hpp"
#include "fractline/geometry.hpp"
#include "fractline/headtail.hpp"
#include "fractline/powerlaw.hpp"

namespace fractline {

struct AnalyzeOptions {
  std::string curve_id;
  double head_limit = 0.4;
  int replicates = 1000;
  int box_levels = 10;
  BendMetric metric = BendMetric::PerpendicularDistance;
  /// Below this many (positive) bends the sample is too thin to trust the
  /// scaling statistics and the report is flagged.
  std::size_t min_bends = 40;
  FitOptions power_law;
};

/// One row of summary statistics for a curve: scaling of its bends under
/// head/tail breaks, power-law fit of the bend sizes, and box-counting
/// dimension. alpha and p are NaN when the power-law stage was skipped for
/// lack of data; check `flags`.
struct AnalysisReport {
  std::string curve_id;
  std::size_t n_vertices = 0;
  std::size_t n_bends = 0;  // positive-size bends, the statistical sample
  int ht_index = 1;
  int recurrence_count = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double box_dimension = 0.0;
  double r2 = 0.0;
  bool is_fractal_def3 = false;
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
  std::vector<std::pair<std::string, std::string>> parameters;

  // Stage detail, useful for reporting and plots.
  HeadTailResult head_tail;
  PowerLawFit power_law;  // valid only when alpha is finite
  BoxCountEstimate boxes;
};

namespace detail {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const insufficient_data_error& e) {
    throw insufficient_data_error(std::string(name) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(name) + ": " + e.what());
  }
}

}  // namespace detail

/// Full pipeline: decompose -> bend sizes -> head/tail breaks -> power law ->
/// box dimension. Degenerate inputs (no positive bends) report ht_index 1
/// rather than failing, so a straight segment analyzes cleanly as
/// "not fractal".
inline AnalysisReport analyze(const Polyline& curve, std::uint64_t seed,
                              const AnalyzeOptions& opts = {}) {
  AnalysisReport report;
  report.curve_id = opts.curve_id;
  report.n_vertices = curve.points.size();
  report.seed = seed;

  const BendDecomposition decomposition =
      detail::stage("decompose", [&] { return decompose(curve, opts.metric); });
  const std::vector<double> sizes = bend_sizes(decomposition, true);
  report.n_bends = sizes.size();
  if (report.n_bends < opts.min_bends) report.flags.push_back("insufficient_sample");

  if (sizes.empty()) {
    report.flags.push_back("no_positive_bends");
    report.head_tail = HeadTailResult{{}, {}, 1, opts.head_limit};
  } else {
    report.head_tail = detail::stage(
        "head_tail_breaks", [&] { return head_tail_breaks(sizes, opts.head_limit); });
  }
  report.ht_index = report.head_tail.ht_index;
  report.recurrence_count = report.ht_index - 1;
  report.is_fractal_def3 = report.ht_index >= 3;

  std::size_t distinct = 0;
  {
    std::vector<double> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (i == 0 || sorted[i] != sorted[i - 1]) ++distinct;
  }
  if (sizes.size() >= 10 && distinct >= 3) {
    report.power_law = detail::stage("power_law", [&] {
      return fit(sizes, opts.replicates, seed, opts.power_law);
    });
    report.alpha = report.power_law.alpha;
    report.p = report.power_law.p;
    if (report.power_law.p_unstable) report.flags.push_back("p_unstable");
  } else {
    report.flags.push_back("power_law_skipped");
  }

  report.boxes =
      detail::stage("box_dimension", [&] { return box_dimension(curve, opts.box_levels); });
  report.box_dimension = report.boxes.dimension;
  report.r2 = report.boxes.r2;
  if (!report.boxes.dimension_in_sanity_range)
    report.flags.push_back("dimension_outside_sanity_range");

  report.parameters = {
      {"seed", std::to_string(seed)},
      {"head_limit", std::to_string(opts.head_limit)},
      {"replicates", std::to_string(opts.replicates)},
      {"box_levels", std::to_string(opts.box_levels)},
      {"metric", opts.metric == BendMetric::PerpendicularDistance ? "perpendicular-distance"
                                                                  : "triangle-area"},
      {"min_bends", std::to_string(opts.min_bends)},
      {"xmin_candidate_cap", std::to_string(opts.power_law.xmin_candidate_cap)},
      {"large_sample_threshold", std::to_string(opts.power_law.large_sample_threshold)},
  };
  return report;
}

}  // namespace fractline
