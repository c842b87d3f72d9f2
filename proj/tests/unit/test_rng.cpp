#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "adrl/rng.hpp"

using namespace adrl;

TEST(Rng, Uniform01StaysInHalfOpenUnitInterval) {
  Rng rng(5);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(Rng, DerivedSeedsDependOnComponentAndSeed) {
  EXPECT_EQ(derive_seed(1, "train/observe"), derive_seed(1, "train/observe"));
  EXPECT_NE(derive_seed(1, "train/observe"), derive_seed(1, "train/policy"));
  EXPECT_NE(derive_seed(1, "train/observe"), derive_seed(2, "train/observe"));
}

TEST(Rng, SampleCategoricalMatchesWeights) {
  const std::array<double, 4> w{1.0, 0.0, 3.0, 6.0};
  Rng rng(11);
  std::array<int, 4> hits{};
  const int n = 200000;
  for (int k = 0; k < n; ++k) ++hits[sample_categorical(w, rng)];
  EXPECT_EQ(hits[1], 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = w[i] / 10.0;
    const double sd = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(hits[i] / double(n), p, 5 * sd + 1e-12) << "category " << i;
  }
}

TEST(Rng, SampleCategoricalRejectsBadWeights) {
  Rng rng(1);
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> negative{0.5, -0.1};
  EXPECT_THROW(sample_categorical(zero, rng), std::invalid_argument);
  EXPECT_THROW(sample_categorical(negative, rng), std::invalid_argument);
}

TEST(Rng, StateRoundTripsThroughText) {
  Rng a = make_rng(3, "x");
  for (int k = 0; k < 17; ++k) a();
  Rng b = rng_from_state(rng_state(a));
  for (int k = 0; k < 100; ++k) ASSERT_EQ(a(), b());
}

TEST(Rng, UniformIndexCoversRange) {
  Rng rng(9);
  std::array<int, 5> hits{};
  for (int k = 0; k < 50000; ++k) ++hits[uniform_index(rng, 5)];
  for (int h : hits) EXPECT_NEAR(h / 50000.0, 0.2, 0.01);
}
