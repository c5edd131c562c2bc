#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fractline/detail/math.hpp"
#include "fractline/errors.hpp"

namespace fractline {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point a, Point b) { return !(a == b); }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

/// Ordered planar vertex sequence. A closed polyline stores the closure
/// implicitly: the first vertex is NOT repeated at the end.
struct Polyline {
  std::vector<Point> points;
  bool closed = false;

  std::size_t size() const { return points.size(); }
  std::size_t segment_count() const { return closed ? points.size() : points.size() - 1; }
};

inline void validate_polyline(const Polyline& p) {
  if (p.points.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    if (!std::isfinite(p.points[i].x) || !std::isfinite(p.points[i].y))
      throw std::invalid_argument("polyline vertex " + std::to_string(i) + " is not finite");
    if (i > 0 && p.points[i] == p.points[i - 1])
      throw std::invalid_argument("polyline has identical consecutive vertices at " +
                                  std::to_string(i));
  }
  if (p.closed && p.points.front() == p.points.back())
    throw std::invalid_argument("closed polyline must not repeat its first vertex");
}

struct Bounds {
  Point min;
  Point max;
};

inline Bounds bounds(const Polyline& p) {
  Bounds b{p.points.front(), p.points.front()};
  for (const Point& q : p.points) {
    b.min.x = std::min(b.min.x, q.x);
    b.min.y = std::min(b.min.y, q.y);
    b.max.x = std::max(b.max.x, q.x);
    b.max.y = std::max(b.max.y, q.y);
  }
  return b;
}

/// Sum of segment lengths; includes the closing segment for closed polylines.
inline double arc_length(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
    total += distance(p.points[i], p.points[i + 1]);
  if (p.closed) total += distance(p.points.back(), p.points.front());
  return total;
}

// ---------------------------------------------------------------------------
// Generators. All are deterministic: identical arguments give bit-identical
// vertices. Vertices are spaced at equal arc length along the curve.
// ---------------------------------------------------------------------------

/// n vertices on the half-circle of radius r, from (r, 0) through (0, r) to
/// (-r, 0), at angles k*pi/(n-1).
inline Polyline gen_half_circle(std::size_t n, double r) {
  if (n < 3) throw std::invalid_argument("half-circle needs n >= 3 vertices");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radius must be positive");
  Polyline out;
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta =
        static_cast<double>(k) * std::numbers::pi / static_cast<double>(n - 1);
    out.points.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

namespace detail {

/// Cumulative arc length of the half-ellipse speed function on a fixed grid
/// over [0, pi], plus a solver for the parameter at a given arc position.
class EllipseArc {
 public:
  EllipseArc(double a, double b) : a_(a), b_(b) {
    const double eps_cell = 1e-13 * (a + b);
    cum_.resize(kCells + 1, 0.0);
    for (std::size_t i = 0; i < kCells; ++i) {
      cum_[i + 1] = cum_[i] + adaptive_simpson([this](double t) { return speed(t); }, node(i),
                                               node(i + 1), eps_cell);
    }
  }

  double total() const { return cum_.back(); }

  /// Parameter t in [0, pi] with arc(0 -> t) == target.
  double invert(double target) const {
    if (target <= 0.0) return 0.0;
    if (target >= total()) return std::numbers::pi;
    std::size_t cell = 0;
    {
      std::size_t lo = 0, hi = kCells;
      while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum_[mid] <= target) lo = mid; else hi = mid;
      }
      cell = lo;
    }
    const double t_lo = node(cell);
    const double t_hi = node(cell + 1);
    const double local_target = target - cum_[cell];
    const double eps = 1e-14 * (a_ + b_);
    // Newton on s(t) - target; speed is bounded below by min(a, b) so the
    // iteration is well conditioned. Fall back to bisection bounds.
    double lo = t_lo, hi = t_hi;
    double t = t_lo + (t_hi - t_lo) * local_target / (cum_[cell + 1] - cum_[cell]);
    for (int iter = 0; iter < 60; ++iter) {
      const double s =
          adaptive_simpson([this](double u) { return speed(u); }, t_lo, t, eps);
      const double err = s - local_target;
      if (std::abs(err) <= 1e-13 * total()) break;
      if (err > 0.0) hi = t; else lo = t;
      double next = t - err / speed(t);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      if (next == t) break;
      t = next;
    }
    return t;
  }

  double speed(double t) const { return std::hypot(a_ * std::sin(t), b_ * std::cos(t)); }

 private:
  static constexpr std::size_t kCells = 1024;
  static double node(std::size_t i) {
    return static_cast<double>(i) * std::numbers::pi / static_cast<double>(kCells);
  }

  double a_;
  double b_;
  std::vector<double> cum_;
};

}  // namespace detail

/// n vertices, equally spaced by arc length, on the upper (or lower) half of
/// the ellipse x^2/a^2 + y^2/b^2 = 1, from (a, 0) to (-a, 0).
inline Polyline gen_half_ellipse(std::size_t n, double a, double b, bool upper) {
  if (n < 3) throw std::invalid_argument("half-ellipse needs n >= 3 vertices");
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("semi-axes must be positive");
  const detail::EllipseArc arc(a, b);
  const double total = arc.total();
  const double sign = upper ? 1.0 : -1.0;
  Polyline out;
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double t;
    if (k == 0) t = 0.0;
    else if (k == n - 1) t = std::numbers::pi;
    else t = arc.invert(total * static_cast<double>(k) / static_cast<double>(n - 1));
    out.points.push_back({a * std::cos(t), sign * b * std::sin(t)});
  }
  return out;
}

/// n vertices, equally spaced by arc length, on the logarithmic spiral
/// r(theta) = a * exp(b * theta) for theta in [0, theta_max]. The arc length
/// has the closed form s(theta) = (a/b) * sqrt(1 + b^2) * (exp(b*theta) - 1),
/// so vertex angles are theta_k = (1/b) * log(1 + (k/(n-1)) *
/// (exp(b*theta_max) - 1)).
inline Polyline gen_log_spiral(std::size_t n, double a, double b, double theta_max) {
  if (n < 3) throw std::invalid_argument("log spiral needs n >= 3 vertices");
  if (!(a > 0.0) || !(b > 0.0) || !(theta_max > 0.0))
    throw std::invalid_argument("spiral parameters must be positive");
  const double growth = std::exp(b * theta_max) - 1.0;
  Polyline out;
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    const double theta = (k == n - 1) ? theta_max : std::log1p(frac * growth) / b;
    const double r = a * std::exp(b * theta);
    out.points.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

/// Standard Koch construction on the unit segment: 4^k segments, 4^k + 1
/// vertices. Guarded at 9 iterations (262'144 segments).
inline Polyline gen_koch(int iterations) {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (iterations > 9)
    throw size_limit_error("koch iterations capped at 9 (4^9 segments)");
  std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}};
  const double c60 = 0.5;
  const double s60 = std::sqrt(3.0) / 2.0;
  for (int iter = 0; iter < iterations; ++iter) {
    std::vector<Point> next;
    next.reserve((pts.size() - 1) * 4 + 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point p = pts[i];
      const Point d = (1.0 / 3.0) * (pts[i + 1] - p);
      const Point peak{d.x * c60 - d.y * s60, d.x * s60 + d.y * c60};
      next.push_back(p);
      next.push_back(p + d);
      next.push_back(p + d + peak);
      next.push_back(p + d + d);
    }
    next.push_back(pts.back());
    pts = std::move(next);
  }
  return Polyline{std::move(pts), false};
}

/// One (scale, detail) pair per construction step: scale shrinks by one
/// third, detail grows by four.
struct ScalingPair {
  double scale;
  std::uint64_t detail;
};

/// Pairs ((1/3)^k, 4^k) for k = 0..iterations. The log-log regression of
/// detail against scale has slope -log(4)/log(3) ~ -1.2619.
inline std::vector<ScalingPair> koch_scaling_table(int iterations) {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (iterations > 31) throw size_limit_error("scaling table capped at 31 steps");
  std::vector<ScalingPair> table;
  table.reserve(static_cast<std::size_t>(iterations) + 1);
  std::uint64_t pow3 = 1;
  std::uint64_t pow4 = 1;
  for (int k = 0; k <= iterations; ++k) {
    table.push_back({1.0 / static_cast<double>(pow3), pow4});
    if (k < iterations) {
      pow3 *= 3;
      pow4 *= 4;
    }
  }
  return table;
}

/// The series 1, 1/2, ..., 1/n.
inline std::vector<double> gen_zipf_series(std::size_t n) {
  if (n < 1) throw std::invalid_argument("zipf series needs n >= 1");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(1.0 / static_cast<double>(k));
  return out;
}

namespace detail {

/// Tangents for an interpolating spline with centripetal Catmull-Rom knots
/// (knot spacing = sqrt of chord length). Interior tangents are the
/// derivative of the parabola through the three surrounding points; open
/// endpoints use the one-sided parabola through the first (last) three.
inline std::vector<Point> spline_tangents(const std::vector<Point>& p, bool closed) {
  const std::size_t n = p.size();
  const std::size_t nedges = closed ? n : n - 1;
  std::vector<double> h(nedges);
  std::vector<Point> slope(nedges);
  for (std::size_t i = 0; i < nedges; ++i) {
    const Point d = p[(i + 1) % n] - p[i];
    h[i] = std::sqrt(norm(d));
    slope[i] = (1.0 / h[i]) * d;
  }
  std::vector<Point> m(n);
  auto interior = [&](std::size_t prev, std::size_t cur) {
    return (1.0 / (h[prev] + h[cur])) * (h[cur] * slope[prev] + h[prev] * slope[cur]);
  };
  if (closed) {
    for (std::size_t i = 0; i < n; ++i) m[i] = interior((i + nedges - 1) % nedges, i);
    return m;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) m[i] = interior(i - 1, i);
  if (n == 2) {
    m[0] = slope[0];
    m[1] = slope[0];
  } else {
    m[0] = (1.0 / (h[0] + h[1])) * ((2.0 * h[0] + h[1]) * slope[0] - h[0] * slope[1]);
    m[n - 1] = (1.0 / (h[nedges - 2] + h[nedges - 1])) *
               ((2.0 * h[nedges - 1] + h[nedges - 2]) * slope[nedges - 1] -
                h[nedges - 1] * slope[nedges - 2]);
  }
  return m;
}

inline Point bezier_eval(Point b0, Point b1, Point b2, Point b3, double u) {
  const double v = 1.0 - u;
  const double v2 = v * v;
  const double u2 = u * u;
  return (v2 * v) * b0 + (3.0 * v2 * u) * b1 + (3.0 * v * u2) * b2 + (u2 * u) * b3;
}

}  // namespace detail

/// Interpolating piecewise-cubic Bezier spline through every input vertex,
/// sampled at `samples_per_segment` uniform parameter steps per input
/// segment. Open output has (n-1)*samples_per_segment + 1 vertices; closed
/// output has n*samples_per_segment. The spline is C1 in its knot parameter.
inline Polyline smooth_bezier(const Polyline& curve, std::size_t samples_per_segment) {
  validate_polyline(curve);
  if (samples_per_segment < 1)
    throw std::invalid_argument("samples_per_segment must be >= 1");
  const std::vector<Point>& p = curve.points;
  const std::size_t n = p.size();
  const std::size_t nedges = curve.closed ? n : n - 1;
  const std::vector<Point> m = detail::spline_tangents(p, curve.closed);

  Polyline out;
  out.closed = curve.closed;
  out.points.reserve(nedges * samples_per_segment + (curve.closed ? 0 : 1));
  if (!curve.closed) out.points.push_back(p[0]);
  for (std::size_t i = 0; i < nedges; ++i) {
    const std::size_t j = (i + 1) % n;
    const double h = std::sqrt(distance(p[i], p[j]));
    const Point b0 = p[i];
    const Point b1 = p[i] + (h / 3.0) * m[i];
    const Point b2 = p[j] - (h / 3.0) * m[j];
    const Point b3 = p[j];
    // Closed: m samples per edge starting at the edge's own vertex (u = 0).
    // Open: the initial vertex was pushed once, so emit u in (0, 1) and then
    // the exact segment endpoint.
    const std::size_t first = curve.closed ? 0 : 1;
    for (std::size_t s = first; s < samples_per_segment; ++s) {
      const double u = static_cast<double>(s) / static_cast<double>(samples_per_segment);
      out.points.push_back(detail::bezier_eval(b0, b1, b2, b3, u));
    }
    if (!curve.closed) out.points.push_back(b3);
  }
  return out;
}

}  // namespace fractline
