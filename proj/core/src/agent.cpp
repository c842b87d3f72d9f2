#include "adrl/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace adrl {

void LearningConfig::validate() const {
  if (!(return_discount > 0.0 && return_discount < 1.0)) {
    throw std::invalid_argument("learning.return_discount must lie in (0,1)");
  }
  if (!(td_discount > 0.0 && td_discount < 1.0)) throw std::invalid_argument("learning.td_discount must lie in (0,1)");
  if (!(actor_learning_rate > 0.0)) throw std::invalid_argument("learning.actor_learning_rate must be positive");
  if (!(critic_learning_rate > 0.0)) throw std::invalid_argument("learning.critic_learning_rate must be positive");
  if (!(learning_rate_decay > 0.0 && learning_rate_decay <= 1.0)) {
    throw std::invalid_argument("learning.learning_rate_decay must lie in (0,1]");
  }
  if (max_episode_len == 0) throw std::invalid_argument("learning.max_episode_len must be positive");
}

std::size_t select_action(const DenseNet& actor, const BeliefVector& state, PolicyMode mode, Rng& rng) {
  const auto scores = actor.forward(state.probs());
  if (mode == PolicyMode::train) return sample_categorical(scores, rng);
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

std::vector<double> discounted_return(std::span<const double> rewards, double lambda) {
  std::vector<double> out(rewards.size());
  double ret = 0.0;
  for (std::size_t k = rewards.size(); k-- > 0;) {
    ret = rewards[k] + lambda * ret;
    out[k] = ret;
  }
  return out;
}

double td_error(double ret, double v_next, double v_curr, double gamma) { return ret + gamma * v_next - v_curr; }

std::size_t ActorPolicy::select(const BeliefVector& belief, const EstimatedDistributions&, Rng& rng) {
  if (mode_ == PolicyMode::train) return select_action(*actor_, belief, mode_, rng);
  if (belief.size() > 0 && belief == last_belief_) return last_action_;
  last_action_ = select_action(*actor_, belief, mode_, rng);
  last_belief_ = belief;
  return last_action_;
}

ActorCriticAgent::ActorCriticAgent(DenseNet actor, DenseNet critic, LearningConfig cfg)
    : actor_(std::move(actor)), critic_(std::move(critic)), cfg_(cfg) {
  cfg_.validate();
  if (actor_.input_dim() != critic_.input_dim()) throw std::invalid_argument("actor and critic input widths differ");
  if (critic_.output_dim() != 1) throw std::invalid_argument("critic must have a single output");
}

ActorCriticAgent ActorCriticAgent::create(const World& world, const LearningConfig& cfg, Rng& init_rng) {
  cfg.validate();
  DenseNet actor = build_actor(world.hypotheses(), world.sensors(), init_rng, cfg.actor_learning_rate,
                               cfg.learning_rate_decay);
  DenseNet critic = build_critic(world.hypotheses(), init_rng, cfg.critic_learning_rate, cfg.learning_rate_decay);
  return ActorCriticAgent(std::move(actor), std::move(critic), cfg);
}

double ActorCriticAgent::value(const BeliefVector& state) const { return critic_.forward(state.probs())[0]; }

EpisodeRecord ActorCriticAgent::run_training_episode(const World& world, DensityModel& density, double pi_up,
                                                     Rng& truth_rng, Rng& observe_rng, Rng& policy_rng) {
  const std::size_t truth = draw_hypothesis(world.prior, truth_rng);
  ActorPolicy policy(actor_, PolicyMode::train);
  EpisodeRecord rec =
      rollout_episode(policy, world, density.estimates, truth, pi_up, cfg_.max_episode_len, observe_rng, policy_rng,
                      cfg_.reward_baseline);
  learn(rec);
  density.reveal(rec.samples, truth);
  return rec;
}

void ActorCriticAgent::learn(const EpisodeRecord& rec) {
  const auto& steps = rec.transitions;
  double ret = 0.0;
  for (std::size_t k = steps.size(); k-- > 0;) {
    const auto& tr = steps[k];
    ret = tr.reward + cfg_.return_discount * ret;
    const bool terminal = (k + 1 == steps.size()) && !rec.truncated;
    const double v_next = terminal ? 0.0 : value(tr.next_state);
    const double v_curr = value(tr.state);
    const double delta = td_error(ret, v_next, v_curr, cfg_.td_discount);
    critic_step(critic_, tr.state.probs(), ret + cfg_.td_discount * v_next, critic_ws_);
    actor_step(actor_, tr.state.probs(), tr.action, delta, actor_ws_);
  }
}

}  // namespace adrl
