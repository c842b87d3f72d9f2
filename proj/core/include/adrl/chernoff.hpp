#pragma once

#include <cstddef>

#include "adrl/episode.hpp"

namespace adrl {

struct ChernoffConfig {
  double explore_prob = 0.1;
  // Use the true sensor laws instead of the fitted estimates (diagnostics).
  bool oracle_kl = false;

  void validate() const;
};

// KL(Bern(p) || Bern(q)). Inputs are clamped to [1e-12, 1 - 1e-12].
double kl_bernoulli(double p, double q);

// With probability explore_prob a uniformly random sensor; otherwise the sensor
// maximizing min_{m != m_hat} KL(p_{i,m_hat} || p_{i,m}), m_hat = argmax belief.
// Ties go to the lowest sensor index. Always consumes one draw, plus one more
// when exploring.
std::size_t chernoff_select(const BeliefVector& belief, const EstimatedDistributions& est,
                            const ChernoffConfig& cfg, Rng& rng);

class ChernoffPolicy final : public SensorPolicy {
 public:
  // `oracle` is only consulted when cfg.oracle_kl is set.
  ChernoffPolicy(ChernoffConfig cfg, const EstimatedDistributions* oracle = nullptr);
  std::size_t select(const BeliefVector& belief, const EstimatedDistributions& est, Rng& rng) override;

 private:
  ChernoffConfig cfg_;
  const EstimatedDistributions* oracle_;
};

// The change-point test episode with the Chernoff rule choosing sensors.
TestEpisodeResult run_chernoff_episode(const World& world, DensityModel& density, const ChernoffConfig& cfg,
                                       const Thresholds& thr, const TestSchedule& schedule, EpisodeStreams& rngs);

}  // namespace adrl
