#include "sprayeval/geometry.hpp"

#include <algorithm>
#include <gtest/gtest.h>

#include "sprayeval/errors.hpp"
#include "sprayeval/random.hpp"
#include "test_util.hpp"

namespace {

using sprayeval::BoundingBox;
using sprayeval::Interval;
using sprayeval::Rng;
using testutil::box;

TEST(Iou, MatchesPixelCountOracleOnIntegerBoxes) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = 24, h = 24;
    auto random_box = [&] {
      const int x1 = static_cast<int>(rng.uniform_int(0, w - 2));
      const int y1 = static_cast<int>(rng.uniform_int(0, h - 2));
      const int x2 = static_cast<int>(rng.uniform_int(x1 + 1, w));
      const int y2 = static_cast<int>(rng.uniform_int(y1 + 1, h));
      return box(x1, y1, x2, y2);
    };
    const BoundingBox a = random_box();
    const BoundingBox b = random_box();
    EXPECT_DOUBLE_EQ(sprayeval::iou(a, b), testutil::pixel_iou(a, b, w, h));
  }
}

TEST(Iou, IdenticalBoxesGiveExactlyOne) {
  const BoundingBox a = box(3.25, 1.5, 9.75, 8.5);
  EXPECT_EQ(sprayeval::iou(a, a), 1.0);
}

TEST(Iou, DisjointAndTouchingBoxesGiveZero) {
  EXPECT_EQ(sprayeval::iou(box(0, 0, 2, 2), box(5, 5, 7, 7)), 0.0);
  EXPECT_EQ(sprayeval::iou(box(0, 0, 2, 2), box(2, 0, 4, 2)), 0.0);
}

TEST(Iou, SymmetricAndWithinUnitRange) {
  Rng rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    auto random_box = [&] {
      const double x1 = rng.uniform_real() * 50;
      const double y1 = rng.uniform_real() * 50;
      return box(x1, y1, x1 + 0.5 + rng.uniform_real() * 20,
                 y1 + 0.5 + rng.uniform_real() * 20);
    };
    const BoundingBox a = random_box();
    const BoundingBox b = random_box();
    const double ab = sprayeval::iou(a, b);
    EXPECT_EQ(ab, sprayeval::iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(IntersectionArea, HandCases) {
  EXPECT_DOUBLE_EQ(sprayeval::intersection_area(box(0, 0, 4, 4), box(2, 2, 6, 6)),
                   4.0);
  EXPECT_DOUBLE_EQ(sprayeval::intersection_area(box(0, 0, 4, 4), box(1, 1, 3, 3)),
                   4.0);
  EXPECT_DOUBLE_EQ(sprayeval::intersection_area(box(0, 0, 1, 1), box(1, 1, 2, 2)),
                   0.0);
}

TEST(BoundingBox, DimensionsAndValidity) {
  const BoundingBox b = box(1, 2, 4, 7);
  EXPECT_DOUBLE_EQ(b.width(), 3.0);
  EXPECT_DOUBLE_EQ(b.height(), 5.0);
  EXPECT_DOUBLE_EQ(b.area(), 15.0);
  EXPECT_TRUE(b.valid());
  EXPECT_FALSE(box(4, 2, 4, 7).valid());
  EXPECT_FALSE(box(5, 2, 4, 7).valid());
}

// Oracle: mark integer cells covered by any interval, count marks.
long long cell_count(const std::vector<Interval>& ivs, int limit) {
  std::vector<char> covered(static_cast<std::size_t>(limit), 0);
  for (const Interval& iv : ivs)
    for (int x = 0; x < limit; ++x)
      if (x >= iv.lo && x + 1 <= iv.hi) covered[static_cast<std::size_t>(x)] = 1;
  return std::count(covered.begin(), covered.end(), 1);
}

TEST(Intervals, UnionLengthMatchesCellCountOracle) {
  Rng rng(303);
  for (int trial = 0; trial < 300; ++trial) {
    const int limit = 40;
    std::vector<Interval> ivs;
    const int n = static_cast<int>(rng.uniform_int(0, 6));
    for (int i = 0; i < n; ++i) {
      const int lo = static_cast<int>(rng.uniform_int(0, limit - 1));
      const int hi = static_cast<int>(rng.uniform_int(lo + 1, limit));
      ivs.push_back({static_cast<double>(lo), static_cast<double>(hi)});
    }
    EXPECT_DOUBLE_EQ(sprayeval::union_length(ivs),
                     static_cast<double>(cell_count(ivs, limit)));
  }
}

TEST(Intervals, MergeProducesSortedDisjointCover) {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> ivs;
    const int n = static_cast<int>(rng.uniform_int(0, 8));
    for (int i = 0; i < n; ++i) {
      const double lo = rng.uniform_real() * 30;
      ivs.push_back({lo, lo + rng.uniform_real() * 10});
    }
    const std::vector<Interval> merged = sprayeval::merge_intervals(ivs);
    double total = 0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      EXPECT_LT(merged[i].lo, merged[i].hi);
      if (i > 0) EXPECT_LT(merged[i - 1].hi, merged[i].lo);
      total += merged[i].length();
    }
    EXPECT_NEAR(total, sprayeval::union_length(ivs), 1e-9);
    // Every input endpoint stays inside the merged cover.
    for (const Interval& iv : ivs) {
      bool lo_in = false, hi_in = false;
      for (const Interval& m : merged) {
        lo_in = lo_in || (iv.lo >= m.lo && iv.lo <= m.hi);
        hi_in = hi_in || (iv.hi >= m.lo && iv.hi <= m.hi);
      }
      EXPECT_TRUE(lo_in);
      EXPECT_TRUE(hi_in);
    }
  }
}

TEST(Intervals, UnionLengthNeverExceedsSumAndIsPermutationInvariant) {
  Rng rng(505);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> ivs;
    double sum = 0;
    const int n = static_cast<int>(rng.uniform_int(1, 7));
    for (int i = 0; i < n; ++i) {
      const double lo = rng.uniform_real() * 20;
      const double len = rng.uniform_real() * 8;
      ivs.push_back({lo, lo + len});
      sum += len;
    }
    const double len = sprayeval::union_length(ivs);
    EXPECT_LE(len, sum + 1e-12);
    std::vector<Interval> shuffled = ivs;
    rng.shuffle(shuffled);
    EXPECT_DOUBLE_EQ(sprayeval::union_length(shuffled), len);
  }
}

TEST(Intervals, TouchingIntervalsMergeIntoOne) {
  const auto merged = sprayeval::merge_intervals({{0, 1}, {1, 2}, {3, 4}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_DOUBLE_EQ(merged[0].lo, 0.0);
  EXPECT_DOUBLE_EQ(merged[0].hi, 2.0);
  EXPECT_DOUBLE_EQ(merged[1].lo, 3.0);
  EXPECT_DOUBLE_EQ(merged[1].hi, 4.0);
}

TEST(Intervals, InvertedIntervalIsRejected) {
  EXPECT_THROW(sprayeval::merge_intervals({{2, 1}}), sprayeval::ValidationError);
}

}  // namespace
