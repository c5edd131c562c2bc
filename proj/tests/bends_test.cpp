#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fractline/bends.hpp"
#include "fractline/geometry.hpp"
#include "fractline/headtail.hpp"
#include "support/test_support.hpp"

using namespace fractline;
namespace ts = testsupport;

namespace {

/// Fixture decomposition carrying a prescribed size multiset; start/apex/end
/// indices are synthetic but consistent with one open chain.
BendDecomposition fixture_with_sizes(const std::vector<double>& sizes) {
  BendDecomposition d;
  const int n = static_cast<int>(sizes.size()) + 2;
  d.chains.emplace_back(n);
  std::iota(d.chains[0].begin(), d.chains[0].end(), 0);
  d.source_n = static_cast<std::size_t>(n);
  for (int i = 0; i < static_cast<int>(sizes.size()); ++i)
    d.bends.push_back({0, i + 1, n - 1, sizes[static_cast<std::size_t>(i)], 0, -1, 0, 0});
  return d;
}

}  // namespace

TEST(Decompose, VShapeIsOneBend) {
  const Polyline v{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, false};
  const BendDecomposition d = decompose(v);
  ASSERT_EQ(d.bends.size(), 1u);
  EXPECT_EQ(d.bends[0].start, 0);
  EXPECT_EQ(d.bends[0].apex, 1);
  EXPECT_EQ(d.bends[0].end, 2);
  EXPECT_DOUBLE_EQ(d.bends[0].size, 1.0);
  EXPECT_EQ(d.bends[0].depth, 0);
  EXPECT_EQ(d.bends[0].parent, -1);
  EXPECT_EQ(d.source_n, 3u);
}

TEST(Decompose, FourPointChainBreaksTieToLowestIndex) {
  const Polyline c{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {3.0, 0.0}}, false};
  const BendDecomposition d = decompose(c);
  ASSERT_EQ(d.bends.size(), 2u);
  // Both interior vertices are 1.0 from the chord; the tie goes to index 1.
  EXPECT_EQ(d.bends[0].apex, 1);
  EXPECT_DOUBLE_EQ(d.bends[0].size, 1.0);
  EXPECT_EQ(d.bends[1].start, 1);
  EXPECT_EQ(d.bends[1].apex, 2);
  EXPECT_EQ(d.bends[1].end, 3);
  EXPECT_NEAR(d.bends[1].size, 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_EQ(d.bends[1].depth, 1);
  EXPECT_EQ(d.bends[1].parent, 0);
}

TEST(Decompose, CollinearChainEmitsZeroSizeBend) {
  const Polyline line{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, false};
  const BendDecomposition d = decompose(line);
  ASSERT_EQ(d.bends.size(), 1u);
  EXPECT_EQ(d.bends[0].apex, 1);
  EXPECT_EQ(d.bends[0].size, 0.0);
}

TEST(Decompose, ClosedRingIsCutIntoTwoChains) {
  const Polyline square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, true};
  const BendDecomposition d = decompose(square);
  ASSERT_EQ(d.chains.size(), 2u);
  EXPECT_EQ(d.chain_splits, (std::vector<int>{0, 2}));  // (1,1) is farthest from (0,0)
  EXPECT_EQ(d.source_n, 6u);                            // 3 + 3 vertices across chains
  ASSERT_EQ(d.bends.size(), 2u);                        // n - 2
  for (const Bend& b : d.bends) EXPECT_NEAR(b.size, std::sqrt(2.0) / 2.0, 1e-12);
  // Apexes cover every non-cut vertex exactly once.
  EXPECT_EQ(d.chains[0][static_cast<std::size_t>(d.bends[0].apex)], 1);
  EXPECT_EQ(d.chains[1][static_cast<std::size_t>(d.bends[1].apex)], 3);
}

TEST(Decompose, RejectsTooFewVertices) {
  EXPECT_THROW(decompose(Polyline{{{0.0, 0.0}, {1.0, 0.0}}, false}), std::invalid_argument);
  EXPECT_THROW(decompose(Polyline{{{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}, true}),
               std::invalid_argument);
}

TEST(Decompose, ApexPartitionOnRandomPolylines) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng.index(38);
    const bool closed = n >= 4 && rng.uniform() < 0.3;
    const Polyline p = ts::random_polyline(rng, n, closed);
    const BendDecomposition d = decompose(p);
    std::size_t interior = 0;
    for (const auto& chain : d.chains) interior += chain.size() - 2;
    ASSERT_EQ(d.bends.size(), interior);
    // Every interior chain position is an apex exactly once, and children
    // stay inside their parent's span.
    std::vector<std::vector<int>> seen(d.chains.size());
    for (std::size_t c = 0; c < d.chains.size(); ++c)
      seen[c].assign(d.chains[c].size(), 0);
    for (const Bend& b : d.bends) {
      ASSERT_LT(b.start, b.apex);
      ASSERT_LT(b.apex, b.end);
      ++seen[static_cast<std::size_t>(b.chain)][static_cast<std::size_t>(b.apex)];
      if (b.parent >= 0) {
        const Bend& parent = d.bends[static_cast<std::size_t>(b.parent)];
        ASSERT_GE(b.start, parent.start);
        ASSERT_LE(b.end, parent.end);
      }
    }
    for (std::size_t c = 0; c < d.chains.size(); ++c) {
      for (std::size_t i = 1; i + 1 < seen[c].size(); ++i) ASSERT_EQ(seen[c][i], 1);
      ASSERT_EQ(seen[c].front(), 0);
      ASSERT_EQ(seen[c].back(), 0);
    }
  }
}

TEST(Decompose, DeterministicAndRigidMotionInvariant) {
  SplitMix64 rng(7);
  const Polyline p = ts::random_polyline(rng, 30);
  const BendDecomposition d1 = decompose(p);
  const BendDecomposition d2 = decompose(p);
  ASSERT_EQ(d1.bends.size(), d2.bends.size());
  for (std::size_t i = 0; i < d1.bends.size(); ++i) {
    EXPECT_EQ(d1.bends[i].apex, d2.bends[i].apex);
    EXPECT_EQ(d1.bends[i].size, d2.bends[i].size);
  }
  const Polyline moved = ts::rotated(p, 0.7, {3.0, -2.0});
  const BendDecomposition dm = decompose(moved);
  ASSERT_EQ(dm.bends.size(), d1.bends.size());
  for (std::size_t i = 0; i < d1.bends.size(); ++i) {
    EXPECT_EQ(dm.bends[i].apex, d1.bends[i].apex);
    EXPECT_EQ(dm.bends[i].start, d1.bends[i].start);
    EXPECT_NEAR(dm.bends[i].size, d1.bends[i].size, 1e-9);
  }
}

TEST(Decompose, TriangleAreaMetricIsAvailable) {
  const Polyline v{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, false};
  const BendDecomposition d = decompose(v, BendMetric::TriangleArea);
  ASSERT_EQ(d.bends.size(), 1u);
  EXPECT_DOUBLE_EQ(d.bends[0].size, 1.0);  // base 2, height 1
}

TEST(BendSizes, FiltersZeroSizes) {
  const Polyline v{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, false};
  EXPECT_EQ(bend_sizes(decompose(v)), std::vector<double>{1.0});

  const Polyline c{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {3.0, 0.0}}, false};
  const std::vector<double> sizes = bend_sizes(decompose(c));
  ASSERT_EQ(sizes.size(), 2u);
  EXPECT_DOUBLE_EQ(sizes[0], 1.0);
  EXPECT_NEAR(sizes[1], 0.4472, 5e-5);

  const Polyline line{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, false};
  EXPECT_TRUE(bend_sizes(decompose(line)).empty());
  EXPECT_EQ(bend_sizes(decompose(line), false), std::vector<double>{0.0});
}

TEST(BendSizes, ConvexHalfCircleKeepsAllBends) {
  const std::vector<double> sizes = bend_sizes(decompose(gen_half_circle(1000, 1.0)));
  EXPECT_EQ(sizes.size(), 998u);
  for (double s : sizes) EXPECT_GT(s, 0.0);
}

TEST(BendSizes, FarMoreSmallThanLargeOnConvexCurves) {
  for (const Polyline& curve :
       {gen_half_circle(200, 1.0), gen_half_ellipse(201, 2.0, 1.0, true),
        gen_log_spiral(300, 1.0, 0.1759, 6.0 * std::numbers::pi)}) {
    const std::vector<double> sizes = bend_sizes(decompose(curve));
    const double m = std::accumulate(sizes.begin(), sizes.end(), 0.0) /
                     static_cast<double>(sizes.size());
    const std::size_t below =
        static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(),
                                               [m](double s) { return s < m; }));
    EXPECT_GT(below, sizes.size() - below);
  }
}

TEST(AssignClasses, ZipfFixtureGetsThreeClasses) {
  const std::vector<double> sizes = gen_zipf_series(10);
  BendDecomposition d = fixture_with_sizes(sizes);
  const HeadTailResult ht = head_tail_breaks(sizes);
  ASSERT_EQ(ht.ht_index, 3);
  d = assign_classes(d, ht);
  EXPECT_EQ(d.bends[0].cls, 3);  // size 1
  EXPECT_EQ(d.bends[1].cls, 2);  // 1/2
  EXPECT_EQ(d.bends[2].cls, 2);  // 1/3
  for (std::size_t i = 3; i < 10; ++i) EXPECT_EQ(d.bends[i].cls, 1);
}

TEST(AssignClasses, AllEqualSizesLandInClassOne) {
  const std::vector<double> sizes{2.0, 2.0, 2.0, 2.0};
  BendDecomposition d = fixture_with_sizes(sizes);
  d = assign_classes(d, head_tail_breaks(sizes));
  for (const Bend& b : d.bends) EXPECT_EQ(b.cls, 1);
}

TEST(AssignClasses, MismatchedHeadTailResultThrows) {
  BendDecomposition d = fixture_with_sizes(gen_zipf_series(10));
  const HeadTailResult other = head_tail_breaks(std::vector<double>{1.0, 2.0, 3.0, 40.0});
  EXPECT_THROW(assign_classes(d, other), std::invalid_argument);
}

TEST(AssignClasses, ZeroSizeBendsGetClassOne) {
  const Polyline c{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {3.0, 1.0}}, false};
  BendDecomposition d = decompose(c);
  const std::vector<double> sizes = bend_sizes(d);
  d = assign_classes(d, head_tail_breaks(sizes));
  for (const Bend& b : d.bends) {
    if (b.size == 0.0) EXPECT_EQ(b.cls, 1);
  }
}

TEST(AssignClasses, HalfCircleHistogramMatchesHeadTailCounts) {
  BendDecomposition d = decompose(gen_half_circle(500, 1.0));
  const HeadTailResult ht = head_tail_breaks(bend_sizes(d));
  d = assign_classes(d, ht);
  std::vector<std::size_t> hist(static_cast<std::size_t>(ht.ht_index), 0);
  for (const Bend& b : d.bends) ++hist[static_cast<std::size_t>(b.cls) - 1];
  EXPECT_EQ(hist, ht.class_counts);
  for (std::size_t c = 0; c + 1 < hist.size(); ++c) EXPECT_GT(hist[c], hist[c + 1]);
}

TEST(Generalize, LevelOneIsIdentity) {
  SplitMix64 rng(5);
  for (bool closed : {false, true}) {
    const Polyline p = ts::random_polyline(rng, 20, closed);
    BendDecomposition d = decompose(p);
    d = assign_classes(d, head_tail_breaks(bend_sizes(d)));
    const Polyline same = generalize(p, d, 1);
    ASSERT_EQ(same.points.size(), p.points.size());
    for (std::size_t i = 0; i < p.points.size(); ++i) EXPECT_EQ(same.points[i], p.points[i]);
    EXPECT_EQ(same.closed, p.closed);
  }
}

TEST(Generalize, RemovingTheOnlyBendLeavesTheChord) {
  const Polyline v{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, false};
  BendDecomposition d = decompose(v);
  d = assign_classes(d, head_tail_breaks(bend_sizes(d)));
  const Polyline chord = generalize(v, d, 2);
  ASSERT_EQ(chord.points.size(), 2u);
  EXPECT_EQ(chord.points[0], (Point{0.0, 0.0}));
  EXPECT_EQ(chord.points[1], (Point{2.0, 0.0}));
}

TEST(Generalize, HalfCircleLevelsShrinkMonotonically) {
  const Polyline c = gen_half_circle(501, 1.0);  // odd: the apex (0, 1) is a vertex
  BendDecomposition d = decompose(c);
  const HeadTailResult ht = head_tail_breaks(bend_sizes(d));
  ASSERT_GE(ht.ht_index, 4);
  d = assign_classes(d, ht);
  std::size_t prev = c.points.size() + 1;
  for (int level = 1; level <= 4; ++level) {
    const Polyline g = generalize(c, d, level);
    EXPECT_LT(g.points.size(), prev);
    prev = g.points.size();
    const bool has_apex = std::any_of(g.points.begin(), g.points.end(), [](Point p) {
      return std::abs(p.x) < 1e-12 && std::abs(p.y - 1.0) < 1e-12;
    });
    EXPECT_TRUE(has_apex) << "level " << level;
  }
  const Polyline chord = generalize(c, d, ht.ht_index + 1);
  EXPECT_EQ(chord.points.size(), 2u);
}

TEST(Generalize, RejectsBadLevelsAndUnassignedClasses) {
  const Polyline v{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, false};
  BendDecomposition d = decompose(v);
  EXPECT_THROW(generalize(v, d, 1), std::invalid_argument);  // classes not assigned
  d = assign_classes(d, head_tail_breaks(bend_sizes(d)));
  EXPECT_THROW(generalize(v, d, 0), std::invalid_argument);
  EXPECT_THROW(generalize(v, d, 3), std::invalid_argument);  // max class 1 -> max level 2
}
