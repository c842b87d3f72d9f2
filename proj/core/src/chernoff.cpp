#include "adrl/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adrl {

void ChernoffConfig::validate() const {
  if (!(explore_prob >= 0.0 && explore_prob <= 1.0)) {
    throw std::invalid_argument("chernoff.explore_prob must lie in [0,1]");
  }
}

double kl_bernoulli(double p, double q) {
  constexpr double lo = 1e-12;
  constexpr double hi = 1.0 - 1e-12;
  p = std::clamp(p, lo, hi);
  q = std::clamp(q, lo, hi);
  const double kl = p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return kl > 0.0 ? kl : 0.0;
}

std::size_t chernoff_select(const BeliefVector& belief, const EstimatedDistributions& est,
                            const ChernoffConfig& cfg, Rng& rng) {
  const std::size_t sensors = est.sensors();
  if (uniform01(rng) < cfg.explore_prob) return uniform_index(rng, sensors);

  const std::size_t leader = belief.argmax();
  std::size_t best_sensor = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < sensors; ++i) {
    const double p_lead = est.success_prob(i, leader);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < est.hypotheses() && worst > 0.0; ++m) {
      if (m == leader) continue;
      worst = std::min(worst, kl_bernoulli(p_lead, est.success_prob(i, m)));
    }
    if (est.hypotheses() == 1) worst = 0.0;
    if (worst > best_score) {
      best_score = worst;
      best_sensor = i;
    }
  }
  return best_sensor;
}

ChernoffPolicy::ChernoffPolicy(ChernoffConfig cfg, const EstimatedDistributions* oracle)
    : cfg_(cfg), oracle_(oracle) {
  cfg_.validate();
  if (cfg_.oracle_kl && oracle_ == nullptr) throw std::invalid_argument("oracle KL mode needs oracle distributions");
}

std::size_t ChernoffPolicy::select(const BeliefVector& belief, const EstimatedDistributions& est, Rng& rng) {
  return chernoff_select(belief, cfg_.oracle_kl ? *oracle_ : est, cfg_, rng);
}

TestEpisodeResult run_chernoff_episode(const World& world, DensityModel& density, const ChernoffConfig& cfg,
                                       const Thresholds& thr, const TestSchedule& schedule, EpisodeStreams& rngs) {
  ChernoffPolicy policy(cfg, &world.oracle);
  return run_test_episode(policy, world, density, thr, schedule, rngs);
}

}  // namespace adrl
