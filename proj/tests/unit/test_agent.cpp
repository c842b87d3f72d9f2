#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "adrl/agent.hpp"

using namespace adrl;

namespace {

// Single softmax layer whose scores are `scores` for every input.
DenseNet fixed_scores(const std::vector<double>& scores, std::size_t inputs = 8) {
  DenseNet net({{inputs, scores.size(), Activation::softmax}}, 0.01);
  auto& layer = net.mutable_layers()[0];
  std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
  for (std::size_t k = 0; k < scores.size(); ++k) layer.biases[k] = scores[k] > 0 ? std::log(scores[k]) : -1e4;
  return net;
}

const BeliefVector kUniform8(std::vector<double>(8, 0.125));

World default_world() { return World(ProcessSet{{0.2, 0.3, 0.1}, 0.2}); }

}  // namespace

TEST(SelectAction, EvalTakesArgmax) {
  Rng rng(1);
  EXPECT_EQ(select_action(fixed_scores({0.1, 0.7, 0.2}), kUniform8, PolicyMode::eval, rng), 1u);
  EXPECT_EQ(select_action(fixed_scores({0.4, 0.2, 0.4}), kUniform8, PolicyMode::eval, rng), 0u);
}

TEST(SelectAction, TrainSamplesScores) {
  Rng rng(2);
  const DenseNet net = fixed_scores({1.0 / 3, 1.0 / 3, 1.0 / 3});
  std::vector<int> hits(3, 0);
  for (int k = 0; k < 100000; ++k) ++hits[select_action(net, kUniform8, PolicyMode::train, rng)];
  for (int h : hits) EXPECT_NEAR(h / 1e5, 1.0 / 3, 0.01);

  const DenseNet one_hot = fixed_scores({0.0, 0.0, 1.0});
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(select_action(one_hot, kUniform8, PolicyMode::train, rng), 2u);
}

TEST(Reward, Arithmetic) {
  EXPECT_EQ(reward(1.3, 1.3, 7), 0.0);
  EXPECT_DOUBLE_EQ(reward(3.0, 1.0, 4), 0.5);
  EXPECT_THROW(reward(1.0, 0.0, 0), std::invalid_argument);
  // uniform M = 8 prior, belief concentrated to [0.9, 0.1/7 ...] at t = 3
  std::vector<double> p(8, 0.1 / 7);
  p[0] = 0.9;
  const double c_t = confidence(BeliefVector(p));
  const double expected = 0.9 * std::log(9.0) + 7 * (0.1 / 7) * std::log((0.1 / 7) / (1 - 0.1 / 7));
  EXPECT_NEAR(c_t, expected, 1e-12);
  EXPECT_NEAR(reward(c_t, confidence(kUniform8), 3), (expected - std::log(1.0 / 7)) / 3, 1e-12);
}

TEST(DiscountedReturn, KnownValues) {
  const std::vector<double> ones{1, 1, 1};
  const auto r = discounted_return(ones, 0.5);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[0], 1.75);
  EXPECT_DOUBLE_EQ(r[1], 1.5);
  EXPECT_DOUBLE_EQ(r[2], 1.0);
  const std::vector<double> rs{0.3, -1.2, 4.0};
  const auto zero_lambda = discounted_return(rs, 0.0);
  for (std::size_t k = 0; k < rs.size(); ++k) EXPECT_EQ(zero_lambda[k], rs[k]);
  EXPECT_TRUE(discounted_return(std::vector<double>{}, 0.9).empty());
}

TEST(DiscountedReturn, RecurrenceMatchesDirectSum) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> rs(50);
    for (double& r : rs) r = 4 * uniform01(rng) - 2;
    const double lambda = uniform01(rng);
    const auto ret = discounted_return(rs, lambda);
    for (std::size_t t = 0; t < rs.size(); ++t) {
      double direct = 0.0;
      for (std::size_t tau = t; tau < rs.size(); ++tau) direct += std::pow(lambda, double(tau - t)) * rs[tau];
      ASSERT_NEAR(ret[t], direct, 1e-12);
    }
  }
}

TEST(TdError, Arithmetic) {
  EXPECT_EQ(td_error(0, 0, 0, 0.9), 0.0);
  EXPECT_NEAR(td_error(1.0, 2.0, 1.5, 0.9), 1.3, 1e-15);
  EXPECT_NEAR(td_error(0.4, 0.0, 1.0, 0.9), -0.6, 1e-15);  // terminal: V_next = 0
}

TEST(LearningConfig, Validation) {
  LearningConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.return_discount = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = LearningConfig{};
  cfg.td_discount = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = LearningConfig{};
  cfg.max_episode_len = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Rollout, TransitionsChainAndRewardsUseInitialConfidence) {
  const World world = default_world();
  UniformRandomPolicy policy(3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng obs = make_rng(seed, "o"), pol = make_rng(seed, "p");
    const auto rec = rollout_episode(policy, world, world.oracle, seed % 8, 0.8, 1000, obs, pol);
    ASSERT_GE(rec.length(), 1u);
    EXPECT_EQ(rec.transitions.front().state, world.prior);
    const double c0 = confidence(world.prior);
    for (std::size_t k = 0; k < rec.length(); ++k) {
      const auto& tr = rec.transitions[k];
      if (k + 1 < rec.length()) {
        ASSERT_EQ(tr.next_state, rec.transitions[k + 1].state);
      }
      ASSERT_DOUBLE_EQ(tr.reward, (confidence(tr.next_state) - c0) / double(k + 1));
      ASSERT_EQ(rec.samples[k].sensor, tr.action);
      ASSERT_EQ(rec.samples[k].time, k + 1);
    }
    EXPECT_DOUBLE_EQ(rec.transitions[0].reward, confidence(rec.transitions[0].next_state) - c0);
    EXPECT_FALSE(rec.truncated);
    ASSERT_TRUE(rec.accepted.has_value());
    EXPECT_GE(rec.transitions.back().next_state.max(), 0.8);
    for (std::size_t k = 0; k + 1 < rec.length(); ++k) ASSERT_LT(rec.transitions[k].next_state.max(), 0.8);
  }
}

TEST(Rollout, PreviousBaselineRewardsStepGain) {
  const World world = default_world();
  UniformRandomPolicy policy(3);
  Rng obs(4), pol(5);
  const auto rec = rollout_episode(policy, world, world.oracle, 3, 0.8, 1000, obs, pol, RewardBaseline::previous);
  for (std::size_t k = 0; k < rec.length(); ++k) {
    const auto& tr = rec.transitions[k];
    ASSERT_DOUBLE_EQ(tr.reward, (confidence(tr.next_state) - confidence(tr.state)) / double(k + 1));
  }
}

TEST(Rollout, StopsAtMaxLength) {
  const World world = default_world();
  const EstimatedDistributions flat(3, 8);  // uninformative: never accepts
  UniformRandomPolicy policy(3);
  Rng obs(6), pol(7);
  const auto rec = rollout_episode(policy, world, flat, 0, 0.8, 25, obs, pol);
  EXPECT_EQ(rec.length(), 25u);
  EXPECT_TRUE(rec.truncated);
  EXPECT_FALSE(rec.accepted.has_value());
}

TEST(Rollout, PriorAboveThresholdTerminatesImmediately) {
  const World world = default_world();  // pi_0 = 0.504
  UniformRandomPolicy policy(3);
  Rng obs(8), pol(9);
  const auto rec = rollout_episode(policy, world, world.oracle, 0, 0.5, 1000, obs, pol);
  EXPECT_EQ(rec.length(), 0u);
  EXPECT_EQ(rec.accepted, std::optional<std::size_t>(0));

  Rng init(10);
  auto agent = ActorCriticAgent::create(world, LearningConfig{}, init);
  const DenseNet before = agent.actor();
  agent.learn(rec);
  EXPECT_EQ(agent.actor(), before);
}

TEST(Agent, TrainingEpisodeIsDeterministic) {
  const World world = default_world();
  auto run = [&] {
    Rng init(11);
    auto agent = ActorCriticAgent::create(world, LearningConfig{}, init);
    DensityModel density(world);
    Rng truth(12), obs(13), pol(14);
    std::vector<EpisodeRecord> recs;
    for (int e = 0; e < 5; ++e) recs.push_back(agent.run_training_episode(world, density, 0.8, truth, obs, pol));
    return std::make_tuple(agent.actor(), agent.critic(), density.store, recs);
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(std::get<0>(a), std::get<0>(b));
  EXPECT_EQ(std::get<1>(a), std::get<1>(b));
  EXPECT_EQ(std::get<2>(a), std::get<2>(b));
  const auto& ra = std::get<3>(a);
  const auto& rb = std::get<3>(b);
  for (std::size_t e = 0; e < ra.size(); ++e) {
    ASSERT_EQ(ra[e].length(), rb[e].length());
    for (std::size_t k = 0; k < ra[e].length(); ++k) {
      ASSERT_EQ(ra[e].transitions[k].action, rb[e].transitions[k].action);
      ASSERT_EQ(ra[e].transitions[k].reward, rb[e].transitions[k].reward);
    }
  }
}

TEST(Agent, TrainingEpisodeRevealsSamplesUnderTruth) {
  const World world = default_world();
  Rng init(15), truth(16), obs(17), pol(18);
  auto agent = ActorCriticAgent::create(world, LearningConfig{}, init);
  DensityModel density(world);
  const auto rec = agent.run_training_episode(world, density, 0.8, truth, obs, pol);
  EXPECT_EQ(density.store.sample_count(), rec.samples.size());
  std::uint64_t filed = 0;
  for (std::size_t i = 0; i < 3; ++i) filed += density.store.counts(i, rec.true_hypothesis).total;
  EXPECT_EQ(filed, rec.samples.size());
  EXPECT_EQ(density.estimates.success_prob(0, rec.true_hypothesis),
            density.store.estimates().success_prob(0, rec.true_hypothesis));
}

TEST(Agent, LearnFollowsBackwardSweepOrder) {
  const World world = default_world();
  Rng init(19);
  LearningConfig cfg;
  cfg.return_discount = 0.7;
  cfg.td_discount = 0.6;
  auto agent = ActorCriticAgent::create(world, cfg, init);
  UniformRandomPolicy policy(3);
  Rng obs(20), pol(21);
  const auto rec = rollout_episode(policy, world, world.oracle, 6, 0.8, 1000, obs, pol);
  ASSERT_GE(rec.length(), 2u);

  // Replay the sweep by hand on copies of the networks.
  DenseNet actor = agent.actor();
  DenseNet critic = agent.critic();
  StepWorkspace wa, wc;
  double ret = 0.0;
  for (std::size_t k = rec.length(); k-- > 0;) {
    const auto& tr = rec.transitions[k];
    ret = tr.reward + 0.7 * ret;
    const double v_next = k + 1 == rec.length() ? 0.0 : critic.forward(tr.next_state.probs())[0];
    const double v_curr = critic.forward(tr.state.probs())[0];
    const double delta = ret + 0.6 * v_next - v_curr;
    critic_step(critic, tr.state.probs(), ret + 0.6 * v_next, wc);
    actor_step(actor, tr.state.probs(), tr.action, delta, wa);
  }
  agent.learn(rec);
  EXPECT_EQ(agent.actor(), actor);
  EXPECT_EQ(agent.critic(), critic);
}

TEST(Agent, TruncatedEpisodeBootstrapsFromLastState) {
  const World world = default_world();
  Rng init(22);
  auto agent = ActorCriticAgent::create(world, LearningConfig{}, init);
  const EstimatedDistributions flat(3, 8);
  UniformRandomPolicy policy(3);
  Rng obs(23), pol(24);
  const auto rec = rollout_episode(policy, world, flat, 0, 0.8, 1, obs, pol);
  ASSERT_TRUE(rec.truncated);
  ASSERT_EQ(rec.length(), 1u);

  DenseNet critic = agent.critic();
  StepWorkspace ws;
  const auto& tr = rec.transitions[0];
  const double target = tr.reward + 0.9 * critic.forward(tr.next_state.probs())[0];
  critic_step(critic, tr.state.probs(), target, ws);
  agent.learn(rec);
  EXPECT_EQ(agent.critic(), critic);
}

TEST(ActorPolicy, EvalIsMemoizedArgmax) {
  const DenseNet net = fixed_scores({0.2, 0.3, 0.5});
  ActorPolicy policy(net, PolicyMode::eval);
  const EstimatedDistributions est(3, 8);
  Rng rng(25);
  const auto before = rng;
  EXPECT_EQ(policy.select(kUniform8, est, rng), 2u);
  EXPECT_EQ(policy.select(kUniform8, est, rng), 2u);
  EXPECT_EQ(rng, before);  // argmax consumes no randomness
}
