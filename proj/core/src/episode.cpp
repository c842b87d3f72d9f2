#include "adrl/episode.hpp"

#include <stdexcept>
#include <string>

namespace adrl {

World::World(ProcessSet p)
    : procs((p.validate(), std::move(p))),
      space(procs.count()),
      prior(prior_belief(procs, space)),
      oracle(oracle_distributions(procs, space)) {}

DensityModel::DensityModel(const World& world)
    : store(world.sensors(), world.hypotheses()), estimates(store.estimates()) {}

DensityModel::DensityModel(SampleStore s) : store(std::move(s)), estimates(store.estimates()) {}

void DensityModel::reveal(std::span<const SensorSample> samples, std::size_t true_m) {
  estimates = reveal_and_refit(store, samples, true_m);
}

double reward(double confidence_t, double confidence_baseline, std::size_t t) {
  if (t == 0) throw std::invalid_argument("reward: time index must be positive");
  return (confidence_t - confidence_baseline) / static_cast<double>(t);
}

EpisodeRecord rollout_episode(SensorPolicy& policy, const World& world, const EstimatedDistributions& est,
                              std::size_t true_m, double pi_up, std::size_t max_len, Rng& observe_rng,
                              Rng& policy_rng, RewardBaseline baseline) {
  EpisodeRecord rec;
  rec.true_hypothesis = true_m;
  const TrueState truth{world.space[true_m], 0};
  const Thresholds stop{pi_up, 0.0};

  BeliefVector belief = world.prior;
  double reference = confidence(belief);
  for (std::size_t t = 0;; ) {
    if (auto m = check_accept(belief, stop)) {
      rec.accepted = m;
      break;
    }
    if (t == max_len) {
      rec.truncated = true;
      break;
    }
    ++t;
    const std::size_t action = policy.select(belief, est, policy_rng);
    const SensorSample y = observe(truth, action, t, world.procs, observe_rng);
    BeliefVector next = update_posterior(belief, y, est);
    const double c_next = confidence(next);
    const double r = reward(c_next, reference, t);
    if (baseline == RewardBaseline::previous) reference = c_next;
    rec.samples.push_back(y);
    rec.transitions.push_back({std::move(belief), action, r, next});
    belief = std::move(next);
  }
  return rec;
}

EpisodeStreams EpisodeStreams::derive(std::uint64_t seed, std::size_t episode) {
  const std::string tag = std::to_string(episode);
  return {make_rng(seed, "truth/" + tag), make_rng(seed, "observe/" + tag), make_rng(seed, "policy/" + tag)};
}

TestEpisodeResult run_test_episode(SensorPolicy& policy, const World& world, DensityModel& density,
                                   const Thresholds& thr, const TestSchedule& schedule, EpisodeStreams& rngs) {
  const auto& est = density.estimates;
  TestEpisodeResult res;

  BeliefVector belief = world.prior;
  std::vector<SensorSample> warmup;
  warmup.reserve(schedule.warmup_steps);
  const TrueState null_state{world.space[0], 0};
  for (std::size_t t = 1; t <= schedule.warmup_steps; ++t) {
    const std::size_t a = policy.select(belief, est, rngs.policy);
    warmup.push_back(observe(null_state, a, t, world.procs, rngs.observe));
    belief = update_posterior(belief, warmup.back(), est);
  }

  const std::size_t j = draw_hypothesis(world.prior, rngs.truth);
  res.true_hypothesis = j;
  const TrueState state{world.space[j], schedule.warmup_steps};

  std::vector<SensorSample> after;
  bool reported = false;
  std::size_t tp = 0;
  while (tp < schedule.max_sampling_time) {
    ++tp;
    const std::size_t a = policy.select(belief, est, rngs.policy);
    after.push_back(observe(state, a, schedule.warmup_steps + tp, world.procs, rngs.observe));
    belief = update_posterior(belief, after.back(), est);

    if (!reported && check_reject_null(belief, thr)) {
      reported = true;
      res.change_report_time = tp;
      res.false_alarm = (j == 0);
      belief = world.prior;
    }
    if (reported) {
      if (auto m = check_accept(belief, thr)) {
        res.accepted = m;
        break;
      }
    }
  }
  res.claim_delay = tp;
  res.truncated = !res.accepted.has_value();

  density.reveal(warmup, 0);
  density.reveal(after, j);
  return res;
}

}  // namespace adrl
