#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "fractline/detail/math.hpp"
#include "fractline/errors.hpp"
#include "fractline/geometry.hpp"

namespace fractline {

/// Box-counting estimate over a dyadic ladder of grid sizes. `dimension` is
/// the least-squares slope of log(count) against log(1/box_size).
struct BoxCountEstimate {
  struct Level {
    double box_size;
    std::size_t count;
  };
  std::vector<Level> levels;
  double dimension = 0.0;
  double r2 = 0.0;
  Point origin;
  bool dimension_in_sanity_range = true;  // [0.9, 2.0]; informational only
};

namespace detail {

/// Grid cells are half-open squares [i*s, (i+1)*s). Points sitting exactly on
/// the curve's global max boundary clamp into the last cell instead of
/// opening a new one.
struct BoxGrid {
  Point origin;
  double size;
  Point curve_max;

  std::int64_t axis_cell(double v, double o, double vmax) const {
    const std::int64_t raw = static_cast<std::int64_t>(std::floor((v - o) / size));
    const double span = (vmax - o) / size;
    const std::int64_t last = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(span)) - 1);
    return std::min(raw, last);
  }

  std::pair<std::int64_t, std::int64_t> cell(Point p) const {
    return {axis_cell(p.x, origin.x, curve_max.x), axis_cell(p.y, origin.y, curve_max.y)};
  }
};

inline std::uint64_t cell_key(std::pair<std::int64_t, std::int64_t> c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.first)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.second));
}

/// All grid-line crossing parameters t in (0, 1) of the segment a->b along
/// one axis.
inline void axis_crossings(double a, double b, double o, double s, std::vector<double>& ts) {
  if (a == b) return;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::int64_t i = static_cast<std::int64_t>(std::floor((lo - o) / s)) + 1;
  for (;; ++i) {
    const double line = o + static_cast<double>(i) * s;
    if (!(line > lo)) continue;
    if (!(line < hi)) break;
    ts.push_back((line - a) / (b - a));
  }
}

/// Cells intersected by the segment a->b: exact grid-line traversal. The
/// crossing parameters split the segment into runs; each run's midpoint names
/// its cell. A crossing that hits a grid corner exactly produces one
/// duplicated parameter, so both axis steps apply at once and the walk moves
/// diagonally (the documented corner tie rule).
inline void segment_cells(Point a, Point b, const BoxGrid& grid,
                          std::unordered_set<std::uint64_t>& cells,
                          std::vector<double>& scratch) {
  cells.insert(cell_key(grid.cell(a)));
  cells.insert(cell_key(grid.cell(b)));
  scratch.clear();
  axis_crossings(a.x, b.x, grid.origin.x, grid.size, scratch);
  axis_crossings(a.y, b.y, grid.origin.y, grid.size, scratch);
  if (scratch.empty()) return;
  std::sort(scratch.begin(), scratch.end());
  scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
  double prev = 0.0;
  for (std::size_t k = 0; k <= scratch.size(); ++k) {
    const double next = (k < scratch.size()) ? scratch[k] : 1.0;
    const double mid = 0.5 * (prev + next);
    cells.insert(cell_key(grid.cell(a + mid * (b - a))));
    prev = next;
  }
}

}  // namespace detail

/// Number of distinct grid cells of side `box_size` (anchored at `origin`)
/// intersected by any segment of the polyline.
inline std::size_t count_boxes(const Polyline& curve, double box_size, Point origin) {
  validate_polyline(curve);
  if (!(box_size > 0.0) || !std::isfinite(box_size))
    throw std::invalid_argument("box_size must be positive");
  const Bounds bb = bounds(curve);
  const detail::BoxGrid grid{origin, box_size, bb.max};
  std::unordered_set<std::uint64_t> cells;
  std::vector<double> scratch;
  const std::size_t n = curve.points.size();
  const std::size_t segments = curve.segment_count();
  for (std::size_t i = 0; i < segments; ++i) {
    detail::segment_cells(curve.points[i], curve.points[(i + 1) % n], grid, cells, scratch);
  }
  return cells.size();
}

/// Dimension from a dyadic ladder anchored at the bounding-box min corner:
/// box sizes S/2^k for k = 2..num_levels+1 where S is the longest
/// bounding-box side. Starting at S/4 skips the trivial one-box plateau.
inline BoxCountEstimate box_dimension(const Polyline& curve, int num_levels = 10) {
  validate_polyline(curve);
  if (num_levels < 4) throw std::invalid_argument("box_dimension needs num_levels >= 4");
  if (num_levels > 40) throw std::invalid_argument("num_levels too deep for a double grid");
  const Bounds bb = bounds(curve);
  const double side = std::max(bb.max.x - bb.min.x, bb.max.y - bb.min.y);
  if (!(side > 0.0)) throw std::invalid_argument("curve has zero extent");

  BoxCountEstimate est;
  est.origin = bb.min;
  std::vector<double> log_inv_size, log_count;
  for (int k = 2; k <= num_levels + 1; ++k) {
    const double s = side / static_cast<double>(std::int64_t{1} << k);
    const std::size_t count = count_boxes(curve, s, bb.min);
    est.levels.push_back({s, count});
    log_inv_size.push_back(-std::log(s));
    log_count.push_back(std::log(static_cast<double>(count)));
  }
  const detail::LinearFit fit = detail::linear_fit(log_inv_size, log_count);
  est.dimension = fit.slope;
  est.r2 = fit.r2;
  est.dimension_in_sanity_range = est.dimension >= 0.9 && est.dimension <= 2.0;
  return est;
}

}  // namespace fractline
