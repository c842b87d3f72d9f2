#include "adrl/belief.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace adrl {

EstimatedDistributions::EstimatedDistributions(std::size_t sensors, std::size_t hypotheses, double fill)
    : sensors_(sensors), hypotheses_(hypotheses), p_one_(sensors * hypotheses, fill) {}

EstimatedDistributions oracle_distributions(const ProcessSet& procs, const HypothesisSpace& space) {
  EstimatedDistributions est(procs.count(), space.size());
  for (const auto& h : space.hypotheses()) {
    for (std::size_t i = 0; i < procs.count(); ++i) {
      est.set_success_prob(i, h.index, h.is_abnormal(i) ? 1.0 - procs.flip_prob : procs.flip_prob);
    }
  }
  return est;
}

SampleStore::SampleStore(std::size_t sensors, std::size_t hypotheses)
    : sensors_(sensors), hypotheses_(hypotheses), counts_(sensors * hypotheses) {}

void SampleStore::add(const SensorSample& sample, std::size_t true_m) {
  if (sample.sensor >= sensors_ || true_m >= hypotheses_) {
    throw std::out_of_range("sample store index out of range");
  }
  auto& c = counts_[true_m * sensors_ + sample.sensor];
  ++c.total;
  if (sample.value) ++c.ones;
  ++sample_count_;
}

EstimatedDistributions SampleStore::estimates(double laplace) const {
  EstimatedDistributions est(sensors_, hypotheses_);
  for (std::size_t m = 0; m < hypotheses_; ++m) {
    for (std::size_t i = 0; i < sensors_; ++i) {
      const auto& c = counts(i, m);
      est.set_success_prob(i, m, (static_cast<double>(c.ones) + laplace) /
                                     (static_cast<double>(c.total) + 2.0 * laplace));
    }
  }
  return est;
}

SampleStore SampleStore::from_counts(std::size_t sensors, std::size_t hypotheses, std::vector<Counts> counts) {
  if (counts.size() != sensors * hypotheses) throw std::invalid_argument("sample store shape mismatch");
  SampleStore store(sensors, hypotheses);
  for (const auto& c : counts) {
    if (c.ones > c.total) throw std::invalid_argument("sample store has more ones than samples");
    store.sample_count_ += c.total;
  }
  store.counts_ = std::move(counts);
  return store;
}

void Thresholds::validate() const {
  if (!(upper > 0.0 && upper < 1.0)) throw std::invalid_argument("pi_up must lie in (0,1)");
  if (!(lower > 0.0 && lower < 1.0)) throw std::invalid_argument("pi_low must lie in (0,1)");
  if (!(lower < upper)) throw std::invalid_argument("pi_low must be below pi_up");
}

namespace {

// Raise entries below eps to eps and rescale the others so the total stays 1.
// Rescaling can push another entry under eps, hence the loop.
void clamp_to_simplex(std::vector<double>& p, double eps) {
  if (eps <= 0.0) return;
  std::vector<bool> pinned(p.size(), false);
  while (true) {
    double pinned_mass = 0.0;
    double free_mass = 0.0;
    bool changed = false;
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (!pinned[m] && p[m] < eps) {
        pinned[m] = true;
        changed = true;
      }
      if (pinned[m]) {
        pinned_mass += eps;
      } else {
        free_mass += p[m];
      }
    }
    if (!changed) return;
    const double scale = (1.0 - pinned_mass) / free_mass;
    for (std::size_t m = 0; m < p.size(); ++m) p[m] = pinned[m] ? eps : p[m] * scale;
  }
}

}  // namespace

BeliefVector update_posterior(const BeliefVector& belief, const SensorSample& sample,
                              const EstimatedDistributions& est, double clamp_eps) {
  if (belief.size() != est.hypotheses() || sample.sensor >= est.sensors()) {
    throw std::invalid_argument("update_posterior: belief, sample and estimates disagree in shape");
  }
  std::vector<double> next(belief.size());
  double norm = 0.0;
  for (std::size_t m = 0; m < next.size(); ++m) {
    next[m] = belief[m] * est.likelihood(sample.sensor, m, sample.value);
    norm += next[m];
  }
  // smoothed estimates keep every likelihood positive
  assert(norm > 0.0);
  for (double& v : next) v /= norm;
  clamp_to_simplex(next, clamp_eps);
  return BeliefVector(std::move(next));
}

double hypothesis_confidence(const BeliefVector& belief, std::size_t m) {
  const double p = belief[m];
  return std::log(p / (1.0 - p));
}

double confidence(const BeliefVector& belief) {
  double c = 0.0;
  for (std::size_t m = 0; m < belief.size(); ++m) c += belief[m] * hypothesis_confidence(belief, m);
  return c;
}

std::optional<std::size_t> check_accept(const BeliefVector& belief, const Thresholds& thr) {
  const std::size_t best = belief.argmax();
  if (belief[best] >= thr.upper) return best;
  return std::nullopt;
}

bool check_reject_null(const BeliefVector& belief, const Thresholds& thr) { return belief[0] <= thr.lower; }

EstimatedDistributions reveal_and_refit(SampleStore& store, std::span<const SensorSample> samples,
                                        std::size_t true_m) {
  for (const auto& s : samples) store.add(s, true_m);
  return store.estimates();
}

}  // namespace adrl
