#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adrl/episode.hpp"
#include "adrl/neuralnet.hpp"

namespace adrl {

struct LearningConfig {
  double return_discount = 0.9;  // lambda in the weighted return
  double td_discount = 0.9;      // gamma in the TD error
  double actor_learning_rate = kActorLearningRate;
  double critic_learning_rate = kCriticLearningRate;
  double learning_rate_decay = 0.999;  // applied once per episode
  std::size_t max_episode_len = 1000;
  RewardBaseline reward_baseline = RewardBaseline::initial;

  void validate() const;
};

enum class PolicyMode { train, eval };

// eval: argmax of the actor's softmax (lowest index on ties).
// train: categorical draw from the softmax.
std::size_t select_action(const DenseNet& actor, const BeliefVector& state, PolicyMode mode, Rng& rng);

// R_t = sum_{tau >= t} lambda^(tau - t) r_tau via R <- r_tau + lambda R.
std::vector<double> discounted_return(std::span<const double> rewards, double lambda);

// delta = R + gamma V_next - V_curr
double td_error(double ret, double v_next, double v_curr, double gamma);

// Wraps an actor network as a SensorPolicy. In eval mode the last
// (belief, action) pair is memoized since the argmax is a pure function.
class ActorPolicy final : public SensorPolicy {
 public:
  ActorPolicy(const DenseNet& actor, PolicyMode mode) : actor_(&actor), mode_(mode) {}
  std::size_t select(const BeliefVector& belief, const EstimatedDistributions& est, Rng& rng) override;

 private:
  const DenseNet* actor_;
  PolicyMode mode_;
  BeliefVector last_belief_;
  std::size_t last_action_ = 0;
};

class ActorCriticAgent {
 public:
  ActorCriticAgent(DenseNet actor, DenseNet critic, LearningConfig cfg);

  // Builds both networks for `world` with seeded initialization.
  static ActorCriticAgent create(const World& world, const LearningConfig& cfg, Rng& init_rng);

  const DenseNet& actor() const { return actor_; }
  const DenseNet& critic() const { return critic_; }
  DenseNet& actor() { return actor_; }
  DenseNet& critic() { return critic_; }
  const LearningConfig& config() const { return cfg_; }

  double value(const BeliefVector& state) const;

  // Draws a truth from the prior, plays with the sampled policy until
  // max(pi) >= pi_up or max_episode_len, runs the backward update sweep, then
  // reveals the truth into `density`.
  EpisodeRecord run_training_episode(const World& world, DensityModel& density, double pi_up, Rng& truth_rng,
                                     Rng& observe_rng, Rng& policy_rng);

  // Backward sweep over a finished episode: accumulate R, compute delta with
  // the current critic, step the critic toward R + gamma V(next), then the
  // actor along delta. The terminal successor has value 0; a truncated
  // episode bootstraps from its last state instead.
  void learn(const EpisodeRecord& rec);

 private:
  DenseNet actor_;
  DenseNet critic_;
  LearningConfig cfg_;
  StepWorkspace actor_ws_;
  StepWorkspace critic_ws_;
};

}  // namespace adrl
