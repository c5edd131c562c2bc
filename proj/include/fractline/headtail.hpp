#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fractline/detail/math.hpp"

namespace fractline {

/// Result of head/tail breaks. `breaks` holds the successive split means in
/// the order they were taken (each is larger than the last); class 1 is the
/// first tail (the smallest values), class ht_index the final head.
struct HeadTailResult {
  std::vector<double> breaks;
  std::vector<std::size_t> class_counts;  // class_counts[c - 1] = size of class c
  int ht_index = 1;
  double head_limit = 0.4;

  /// How many times the far-more-small-than-large scaling recurred.
  int recurrence_count() const { return ht_index - 1; }
};

/// Recursive head/tail partition: split the current set at its mean into a
/// head (strictly above the mean) and a tail, then recurse on the head while
/// it stays a minority (|head|/|current| <= head_limit) and can still split.
/// A split counts as soon as both parts are non-empty; the continuation test
/// comes after. ht_index = completed splits + 1.
inline HeadTailResult head_tail_breaks(std::span<const double> values, double head_limit = 0.4) {
  if (values.empty()) throw std::invalid_argument("head/tail breaks needs a non-empty series");
  if (!(head_limit > 0.0) || head_limit > 1.0)
    throw std::invalid_argument("head_limit must be in (0, 1]");
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument("head/tail breaks needs finite positive values");
  }

  HeadTailResult result;
  result.head_limit = head_limit;
  // Work on a sorted copy: the mean becomes a function of the multiset alone
  // (permutation invariant to the bit), and each head is simply the suffix
  // above the partition point.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t lo = 0;  // current set = sorted[lo..n)
  const std::size_t n = sorted.size();
  while (true) {
    const std::size_t count = n - lo;
    const double m = detail::mean(std::span<const double>(sorted).subspan(lo));
    const std::size_t head_begin = static_cast<std::size_t>(
        std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(lo), sorted.end(), m) -
        sorted.begin());
    const std::size_t head_count = n - head_begin;
    if (head_count == 0 || head_count == count) break;  // no split possible
    result.breaks.push_back(m);
    const double head_share = static_cast<double>(head_count) / static_cast<double>(count);
    if (head_share > head_limit) break;
    if (head_count < 2) break;
    lo = head_begin;
  }
  result.ht_index = static_cast<int>(result.breaks.size()) + 1;

  result.class_counts.assign(static_cast<std::size_t>(result.ht_index), 0);
  for (double v : values) {
    std::size_t cls = 0;
    for (double b : result.breaks)
      if (v > b) ++cls;
    ++result.class_counts[cls];
  }
  return result;
}

/// ht-index under the standard 40% head condition.
inline int ht_index(std::span<const double> values) {
  return head_tail_breaks(values, 0.4).ht_index;
}

struct FractalVerdict {
  bool is_fractal = false;
  int ht_index = 1;
};

/// Third definition: fractal iff the scaling recurs at least twice, i.e. the
/// ht-index is at least three.
inline FractalVerdict is_fractal_third_definition(std::span<const double> values) {
  const int ht = ht_index(values);
  return {ht >= 3, ht};
}

}  // namespace fractline
