#include "sprayeval/random.hpp"

#include <algorithm>
#include <cstdint>
#include <gtest/gtest.h>
#include <set>
#include <vector>

namespace {

using sprayeval::derive_seed;
using sprayeval::Rng;

TEST(Rng, SameSeedSameSequence) {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(1), b(2);
  int differing = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() != b.next_u64()) ++differing;
  EXPECT_GT(differing, 60);
}

TEST(Rng, BelowStaysBelowAndCoversSmallRanges) {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t v = rng.below(5);
    EXPECT_LT(v, 5u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(Rng, UniformIntIsInclusiveOfBothEndpoints) {
  Rng rng(8);
  bool hit_lo = false, hit_hi = false;
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t v = rng.uniform_int(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    hit_lo = hit_lo || v == -3;
    hit_hi = hit_hi || v == 3;
  }
  EXPECT_TRUE(hit_lo);
  EXPECT_TRUE(hit_hi);
  EXPECT_EQ(rng.uniform_int(42, 42), 42);
}

TEST(Rng, UniformRealIsHalfOpenUnit) {
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const double v = rng.uniform_real();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Rng, BernoulliDegenerateProbabilities) {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

TEST(Rng, BernoulliTracksProbability) {
  Rng rng(11);
  int heads = 0;
  for (int i = 0; i < 20000; ++i)
    if (rng.bernoulli(0.3)) ++heads;
  EXPECT_NEAR(heads / 20000.0, 0.3, 0.02);
}

TEST(Rng, PoissonZeroMeanIsAlwaysZero) {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.poisson(0.0), 0);
}

TEST(Rng, PoissonSampleMeanNearParameter) {
  Rng rng(13);
  long long total = 0;
  for (int i = 0; i < 20000; ++i) {
    const int v = rng.poisson(4.0);
    EXPECT_GE(v, 0);
    total += v;
  }
  EXPECT_NEAR(total / 20000.0, 4.0, 0.1);
}

TEST(Rng, ShuffleIsAPermutationAndDeterministic) {
  std::vector<int> base(50);
  for (int i = 0; i < 50; ++i) base[static_cast<std::size_t>(i)] = i;

  std::vector<int> a = base, b = base;
  Rng(99).shuffle(a);
  Rng(99).shuffle(b);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, base);

  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, base);
}

TEST(DeriveSeed, DistinctIndicesGiveDistinctStreams) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(42, i));
  EXPECT_EQ(seeds.size(), 1000u);
}

TEST(DeriveSeed, SubstreamsDoNotDependOnConsumptionOrder) {
  // Drawing from stream 0 must not change what stream 1 yields.
  Rng s1_fresh(derive_seed(7, 1));
  Rng s0(derive_seed(7, 0));
  for (int i = 0; i < 100; ++i) (void)s0.next_u64();
  Rng s1_after(derive_seed(7, 1));
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(s1_fresh.next_u64(), s1_after.next_u64());
}

}  // namespace
