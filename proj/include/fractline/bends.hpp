#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "fractline/geometry.hpp"
#include "fractline/headtail.hpp"

namespace fractline {

/// How a bend's size is measured against its chord. PerpendicularDistance is
/// the contract used by every published number here; TriangleArea exists for
/// sensitivity checks only.
enum class BendMetric { PerpendicularDistance, TriangleArea };

/// One recursively defined bend: three vertices (start, apex, end) of one
/// chain, measured against the start-end chord. Indices are positions within
/// the owning chain; BendDecomposition::chains maps them back to the source
/// polyline.
struct Bend {
  int start = 0;
  int apex = 0;
  int end = 0;
  double size = 0.0;
  int depth = 0;
  int parent = -1;  // index into BendDecomposition::bends, -1 for a root
  int cls = 0;      // head/tail class, 1 = smallest; 0 until assigned
  int chain = 0;
};

/// Full bend hierarchy of a polyline. Every interior vertex of every chain is
/// the apex of exactly one bend, so each chain of length m contributes m - 2
/// bends. Closed rings are cut into two open chains before decomposition.
struct BendDecomposition {
  std::vector<Bend> bends;              // deterministic pre-order
  std::vector<std::vector<int>> chains; // source vertex index per chain position
  std::size_t source_n = 0;             // total vertices across chains
  std::vector<int> chain_splits;        // ring cut vertices; empty for open input
};

namespace detail {

inline double chord_offset(Point a, Point b, Point c, BendMetric metric) {
  const Point ab = b - a;
  const double twice_area = std::abs(cross(ab, c - a));
  if (metric == BendMetric::TriangleArea) return 0.5 * twice_area;
  const double chord = norm(ab);
  if (chord == 0.0) return distance(a, c);
  return twice_area / chord;
}

}  // namespace detail

/// Douglas-Peucker-style recursion: the apex of chain span (i, j) is the
/// interior vertex farthest from the chord (ties break to the lowest index);
/// the span then splits at the apex and both halves recurse to exhaustion.
/// Collinear spans still emit their bends, with size 0.
inline BendDecomposition decompose(const Polyline& curve,
                                   BendMetric metric = BendMetric::PerpendicularDistance) {
  validate_polyline(curve);
  if (!curve.closed && curve.points.size() < 3)
    throw std::invalid_argument("open curve needs >= 3 vertices to have a bend");
  if (curve.closed && curve.points.size() < 4)
    throw std::invalid_argument("closed curve needs >= 4 vertices to have bends");

  const int n = static_cast<int>(curve.points.size());
  BendDecomposition d;
  if (!curve.closed) {
    std::vector<int> chain(n);
    std::iota(chain.begin(), chain.end(), 0);
    d.chains.push_back(std::move(chain));
  } else {
    // Cut the ring at vertex 0 and at the vertex farthest from it; both cut
    // chords stay interior to the shape's extent.
    int far = 1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
      const double dist = distance(curve.points[0], curve.points[i]);
      if (dist > best) {
        best = dist;
        far = i;
      }
    }
    std::vector<int> first(far + 1);
    std::iota(first.begin(), first.end(), 0);
    std::vector<int> second(n - far + 1);
    std::iota(second.begin(), second.end() - 1, far);
    second.back() = 0;
    d.chains.push_back(std::move(first));
    d.chains.push_back(std::move(second));
    d.chain_splits = {0, far};
  }
  for (const auto& chain : d.chains) d.source_n += chain.size();

  struct Span {
    int lo, hi, depth, parent;
  };
  for (std::size_t c = 0; c < d.chains.size(); ++c) {
    const std::vector<int>& chain = d.chains[c];
    const int len = static_cast<int>(chain.size());
    if (len < 3) continue;
    std::vector<Span> stack;
    stack.push_back({0, len - 1, 0, -1});
    while (!stack.empty()) {
      const Span s = stack.back();
      stack.pop_back();
      if (s.hi - s.lo < 2) continue;
      const Point a = curve.points[chain[s.lo]];
      const Point b = curve.points[chain[s.hi]];
      int apex = s.lo + 1;
      double size = detail::chord_offset(a, b, curve.points[chain[apex]], metric);
      for (int k = s.lo + 2; k < s.hi; ++k) {
        const double dist = detail::chord_offset(a, b, curve.points[chain[k]], metric);
        if (dist > size) {
          size = dist;
          apex = k;
        }
      }
      const int id = static_cast<int>(d.bends.size());
      d.bends.push_back({s.lo, apex, s.hi, size, s.depth, s.parent, 0, static_cast<int>(c)});
      // Right pushed first so the left half pops next: pre-order, left to right.
      stack.push_back({apex, s.hi, s.depth + 1, id});
      stack.push_back({s.lo, apex, s.depth + 1, id});
    }
  }
  return d;
}

/// Bend-size multiset in decomposition order. Zero-size (collinear) bends
/// carry no scaling information and are dropped by default.
inline std::vector<double> bend_sizes(const BendDecomposition& d, bool exclude_zero = true) {
  std::vector<double> sizes;
  sizes.reserve(d.bends.size());
  for (const Bend& b : d.bends) {
    if (exclude_zero && b.size == 0.0) continue;
    sizes.push_back(b.size);
  }
  return sizes;
}

/// Labels every bend with its head/tail class (1 = smallest). `ht` must have
/// been computed from bend_sizes(d); this is checked by re-classifying the
/// sizes against the breaks. Zero-size bends land in class 1.
inline BendDecomposition assign_classes(BendDecomposition d, const HeadTailResult& ht) {
  const auto classify = [&ht](double size) {
    int cls = 1;
    for (double b : ht.breaks)
      if (size > b) ++cls;
    return cls;
  };
  std::vector<std::size_t> hist(ht.class_counts.size(), 0);
  std::size_t positive = 0;
  for (const Bend& b : d.bends) {
    if (b.size == 0.0) continue;
    ++positive;
    const int cls = classify(b.size);
    if (cls < 1 || static_cast<std::size_t>(cls) > hist.size())
      throw std::invalid_argument("head/tail result does not match this decomposition");
    ++hist[static_cast<std::size_t>(cls) - 1];
  }
  const std::size_t expected =
      std::accumulate(ht.class_counts.begin(), ht.class_counts.end(), std::size_t{0});
  if (positive != expected || hist != ht.class_counts)
    throw std::invalid_argument("head/tail result does not match this decomposition");
  for (Bend& b : d.bends) b.cls = (b.size == 0.0) ? 1 : classify(b.size);
  return d;
}

/// Multi-scale generalization: keep chain endpoints plus the apexes of bends
/// whose class is at least `level`. Level 1 reproduces the input; level
/// max-class + 1 keeps only the chain endpoints.
inline Polyline generalize(const Polyline& curve, const BendDecomposition& d, int level) {
  if (d.bends.empty()) throw std::invalid_argument("decomposition has no bends");
  int max_cls = 0;
  for (const Bend& b : d.bends) {
    if (b.cls < 1) throw std::invalid_argument("generalize needs classes assigned");
    max_cls = std::max(max_cls, b.cls);
  }
  if (level < 1 || level > max_cls + 1)
    throw std::invalid_argument("level must be in [1, max class + 1]");

  std::vector<char> keep(curve.points.size(), 0);
  for (const auto& chain : d.chains) {
    keep[static_cast<std::size_t>(chain.front())] = 1;
    keep[static_cast<std::size_t>(chain.back())] = 1;
  }
  for (const Bend& b : d.bends) {
    if (b.cls >= level)
      keep[static_cast<std::size_t>(d.chains[b.chain][b.apex])] = 1;
  }
  Polyline out;
  out.closed = curve.closed;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (!keep[i]) continue;
    // Collapse coincident survivors (possible when the source revisits a point).
    if (!out.points.empty() && out.points.back() == curve.points[i]) continue;
    out.points.push_back(curve.points[i]);
  }
  return out;
}

}  // namespace fractline
