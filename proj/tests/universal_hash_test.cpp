#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gausskey/universal_hash.hpp"

using namespace gausskey;

TEST(Primes, SmallAndLarge) {
  const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13, 257, 65537, 2147483647ULL, 18446744073709551557ULL};
  for (auto p : primes) EXPECT_TRUE(is_prime(p)) << p;
  for (std::uint64_t c : {0ULL, 1ULL, 4ULL, 561ULL, 3215031751ULL, 18446744073709551615ULL}) EXPECT_FALSE(is_prime(c)) << c;
  EXPECT_EQ(next_prime(256), 257U);
  EXPECT_EQ(next_prime(122904), 122921U);
  EXPECT_EQ(next_prime(0), 2U);
}

TEST(AffineHash, RangeAndDeterminism) {
  const auto h = AffineHash::from_seed(1000, 37, 99);
  const auto g = AffineHash::from_seed(1000, 37, 99);
  for (std::uint64_t x = 0; x < 1000; ++x) {
    ASSERT_LT(h(x), 37U);
    ASSERT_EQ(h(x), g(x));
  }
}

TEST(AffineHash, RejectsBadParameters) {
  EXPECT_THROW(AffineHash(10, 0, 1, 0), Error);
  EXPECT_THROW(AffineHash(10, 3, 0, 0), Error);
  EXPECT_THROW(AffineHash(10, 3, 11, 0), Error);
}

TEST(AffineHash, EnumerationCoversFamilyOnce) {
  const std::uint64_t domain = 7;
  const std::uint64_t family = AffineHash::family_size(domain);
  ASSERT_EQ(family, 42U);
  std::vector<int> seen(7 * 7, 0);
  for (std::uint64_t i = 0; i < family; ++i) {
    const auto h = AffineHash::from_index(domain, 7, i);
    ++seen[h.a() * 7 + h.b()];
  }
  for (std::uint64_t a = 0; a < 7; ++a)
    for (std::uint64_t b = 0; b < 7; ++b) EXPECT_EQ(seen[a * 7 + b], a == 0 ? 0 : 1);
}

TEST(AffineHash, RangeOneIsConstant) {
  const auto h = AffineHash::from_seed(256, 1, 3);
  for (std::uint64_t x = 0; x < 256; ++x) ASSERT_EQ(h(x), 0U);
}

TEST(AffineHash, MultipleRangeRefines) {
  const auto h = AffineHash::from_seed(5000, 64, 8);
  const auto fine = h.with_range(256);
  for (std::uint64_t x = 0; x < 5000; ++x) ASSERT_EQ(fine(x) % 64, h(x));
}

TEST(AffineHash, BinningCoveringDomainIsInjective) {
  const auto h = AffineHash::binning(1000, 1000, 77);
  std::vector<int> hits(1000, 0);
  for (std::uint64_t x = 0; x < 1000; ++x) ++hits[h(x)];
  for (int v : hits) ASSERT_EQ(v, 1);
}

TEST(AffineHash, SampledCollisionRateOnSeeds) {
  // 4096 seeded members; each distinct pair must collide at most 1/16 of the
  // time up to three binomial standard errors.
  const std::uint64_t q = 256, s = 16, seeds = 4096;
  std::vector<std::vector<std::uint8_t>> tables(seeds, std::vector<std::uint8_t>(q));
  for (std::uint64_t k = 0; k < seeds; ++k) {
    const auto h = AffineHash::from_seed(q, s, rng::mix64(k + 1));
    for (std::uint64_t x = 0; x < q; ++x) tables[k][x] = static_cast<std::uint8_t>(h(x));
  }
  const double p = 1.0 / 16.0;
  const double limit = p + 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(seeds));
  double worst = 0.0;
  for (std::uint64_t x = 0; x < q; ++x) {
    for (std::uint64_t y = x + 1; y < q; ++y) {
      std::uint64_t hits = 0;
      for (std::uint64_t k = 0; k < seeds; ++k) hits += tables[k][x] == tables[k][y];
      worst = std::max(worst, static_cast<double>(hits) / static_cast<double>(seeds));
    }
  }
  EXPECT_LE(worst, limit);
}

TEST(AffineHash, ExhaustiveUniversalitySmallDomain) {
  const std::uint64_t q = 50, s = 7;
  const std::uint64_t family = AffineHash::family_size(q);
  std::vector<std::vector<std::uint64_t>> tables;
  for (std::uint64_t i = 0; i < family; ++i) {
    const auto h = AffineHash::from_index(q, s, i);
    std::vector<std::uint64_t> t(q);
    for (std::uint64_t x = 0; x < q; ++x) t[x] = h(x);
    tables.push_back(std::move(t));
  }
  for (std::uint64_t x = 0; x < q; ++x)
    for (std::uint64_t y = x + 1; y < q; ++y) {
      std::uint64_t hits = 0;
      for (const auto& t : tables) hits += t[x] == t[y];
      ASSERT_LE(static_cast<double>(hits) / static_cast<double>(family), 1.0 / static_cast<double>(s)) << x << ',' << y;
    }
}
