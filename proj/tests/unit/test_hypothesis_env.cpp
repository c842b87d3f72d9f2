#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "adrl/hypothesis_env.hpp"

using namespace adrl;

namespace {

// Brute force: every subset of {0..n-1} as a sorted member list, ordered by
// size and then lexicographically.
std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n) {
  std::vector<std::vector<std::size_t>> all;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) s.push_back(i);
    }
    all.push_back(s);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return all;
}

}  // namespace

TEST(HypothesisSpace, ThreeProcessesMatchObservationTable) {
  const HypothesisSpace space(3);
  ASSERT_EQ(space.size(), 8u);
  const std::vector<std::vector<std::size_t>> expected{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  for (std::size_t m = 0; m < 8; ++m) {
    EXPECT_EQ(space[m].members(), expected[m]) << "H" << m;
    EXPECT_EQ(space[m].index, m);
  }
}

TEST(HypothesisSpace, MatchesBruteForceEnumeration) {
  for (std::size_t n = 1; n <= 10; ++n) {
    const HypothesisSpace space = enumerate_hypotheses(n);
    const auto oracle = subsets_by_size(n);
    ASSERT_EQ(space.size(), oracle.size());
    std::set<std::uint32_t> masks;
    for (std::size_t m = 0; m < space.size(); ++m) {
      ASSERT_EQ(space[m].members(), oracle[m]) << "n=" << n << " m=" << m;
      ASSERT_EQ(space.index_of(space[m].mask), m);
      masks.insert(space[m].mask);
    }
    EXPECT_EQ(masks.size(), space.size());
  }
}

TEST(HypothesisSpace, OneProcessGivesTwoHypotheses) {
  const HypothesisSpace space(1);
  ASSERT_EQ(space.size(), 2u);
  EXPECT_EQ(space[0].cardinality(), 0u);
  EXPECT_EQ(space[1].cardinality(), 1u);
}

TEST(HypothesisSpace, RejectsUnsupportedSizes) {
  EXPECT_THROW(HypothesisSpace(0), std::invalid_argument);
  EXPECT_THROW(HypothesisSpace(kMaxProcesses + 1), std::invalid_argument);
}

TEST(Prior, DefaultProcessesGiveKnownNullMass) {
  const ProcessSet procs{{0.2, 0.3, 0.1}, 0.2};
  const HypothesisSpace space(3);
  const BeliefVector prior = prior_belief(procs, space);
  EXPECT_NEAR(prior[0], 0.8 * 0.7 * 0.9, 1e-12);
  EXPECT_NEAR(prior[0], 0.504, 1e-12);
  EXPECT_NEAR(prior[7], 0.2 * 0.3 * 0.1, 1e-12);
}

TEST(Prior, MatchesProductOracleAndSumsToOne) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    ProcessSet procs;
    for (std::size_t i = 0; i < n; ++i) procs.abnormal_probs.push_back(0.01 + 0.98 * uniform01(rng));
    const HypothesisSpace space(n);
    const BeliefVector prior = prior_belief(procs, space);
    EXPECT_NEAR(prior.sum(), 1.0, 1e-12);
    for (std::size_t m = 0; m < space.size(); ++m) {
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        p *= space[m].is_abnormal(i) ? procs.abnormal_probs[i] : 1.0 - procs.abnormal_probs[i];
      }
      ASSERT_NEAR(prior[m], p, 1e-15);
    }
  }
}

TEST(Prior, DrawFrequenciesMatchPrior) {
  const ProcessSet procs{{0.2, 0.3, 0.1}, 0.2};
  const HypothesisSpace space(3);
  const BeliefVector prior = prior_belief(procs, space);
  Rng rng(4);
  std::vector<int> hits(8, 0);
  const int n = 200000;
  for (int k = 0; k < n; ++k) ++hits[draw_hypothesis(prior, rng)];
  for (std::size_t m = 0; m < 8; ++m) {
    const double sd = std::sqrt(prior[m] * (1 - prior[m]) / n);
    EXPECT_NEAR(hits[m] / double(n), prior[m], 5 * sd) << "H" << m;
  }
}

TEST(Observe, FrequenciesFollowFlipProbability) {
  const ProcessSet procs{{0.2, 0.3, 0.1}, 0.2};
  const HypothesisSpace space(3);
  const TrueState state{space[4], 0};  // processes 1 and 2 abnormal
  Rng rng(8);
  const int n = 100000;
  for (std::size_t sensor = 0; sensor < 3; ++sensor) {
    int ones = 0;
    for (int k = 0; k < n; ++k) ones += observe(state, sensor, 1, procs, rng).value;
    const double p = state.current.is_abnormal(sensor) ? 0.8 : 0.2;
    EXPECT_NEAR(ones / double(n), p, 5 * std::sqrt(p * (1 - p) / n)) << "sensor " << sensor;
  }
}

TEST(Observe, ZeroFlipIsExact) {
  const ProcessSet procs{{0.5, 0.5}, 0.0};
  const HypothesisSpace space(2);
  Rng rng(1);
  for (std::size_t m = 0; m < space.size(); ++m) {
    const TrueState state{space[m], 0};
    for (std::size_t i = 0; i < 2; ++i) {
      const SensorSample s = observe(state, i, 3, procs, rng);
      EXPECT_EQ(s.value, space[m].is_abnormal(i) ? 1 : 0);
      EXPECT_EQ(s.sensor, i);
      EXPECT_EQ(s.time, 3u);
    }
  }
}

TEST(Observe, RejectsUnknownSensor) {
  const ProcessSet procs{{0.2, 0.3, 0.1}, 0.2};
  const HypothesisSpace space(3);
  Rng rng(1);
  EXPECT_THROW(observe(TrueState{space[0], 0}, 3, 1, procs, rng), std::out_of_range);
}

TEST(ProcessSet, ValidationRejectsOutOfRangeFields) {
  EXPECT_THROW((ProcessSet{{}, 0.2}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessSet{{0.0, 0.3}, 0.2}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessSet{{1.0}, 0.2}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessSet{{0.2}, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessSet{{0.2}, -0.1}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((ProcessSet{{0.2, 0.3, 0.1}, 0.2}.validate()));
}

TEST(BeliefVector, ArgmaxBreaksTiesLow) {
  const BeliefVector b({0.1, 0.4, 0.4, 0.1});
  EXPECT_EQ(b.argmax(), 1u);
  EXPECT_DOUBLE_EQ(b.max(), 0.4);
  EXPECT_NEAR(b.sum(), 1.0, 1e-15);
}
