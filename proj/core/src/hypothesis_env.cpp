#include "adrl/hypothesis_env.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adrl {

void ProcessSet::validate() const {
  if (abnormal_probs.empty()) throw std::invalid_argument("process count must be at least 1");
  if (abnormal_probs.size() > kMaxProcesses) {
    throw std::invalid_argument("process count " + std::to_string(abnormal_probs.size()) +
                                " exceeds the maximum of " + std::to_string(kMaxProcesses));
  }
  for (std::size_t i = 0; i < abnormal_probs.size(); ++i) {
    const double p = abnormal_probs[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("abnormal probability of process " + std::to_string(i + 1) +
                                  " must lie strictly inside (0,1)");
    }
  }
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) {
    throw std::invalid_argument("flip probability must lie in [0, 0.5)");
  }
}

std::size_t Hypothesis::cardinality() const { return static_cast<std::size_t>(std::popcount(mask)); }

std::vector<std::size_t> Hypothesis::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 32; ++i) {
    if (is_abnormal(i)) out.push_back(i);
  }
  return out;
}

HypothesisSpace::HypothesisSpace(std::size_t process_count) : process_count_(process_count) {
  if (process_count == 0) throw std::invalid_argument("process count must be at least 1");
  if (process_count > kMaxProcesses) {
    throw std::invalid_argument("process count " + std::to_string(process_count) +
                                " exceeds the maximum of " + std::to_string(kMaxProcesses));
  }
  const std::size_t total = std::size_t{1} << process_count;
  hypotheses_.reserve(total);
  index_by_mask_.assign(total, 0);

  // Combinations of size k in lexicographic order of member indices.
  std::vector<std::size_t> combo;
  for (std::size_t k = 0; k <= process_count; ++k) {
    combo.resize(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    while (true) {
      std::uint32_t mask = 0;
      for (std::size_t i : combo) mask |= (1U << i);
      index_by_mask_[mask] = hypotheses_.size();
      hypotheses_.push_back({hypotheses_.size(), mask});

      // advance to the next combination
      std::size_t pos = k;
      while (pos > 0 && combo[pos - 1] == process_count - k + pos - 1) --pos;
      if (pos == 0) break;
      ++combo[pos - 1];
      for (std::size_t j = pos; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
}

HypothesisSpace enumerate_hypotheses(std::size_t process_count) {
  return HypothesisSpace(process_count);
}

std::size_t BeliefVector::argmax() const {
  std::size_t best = 0;
  for (std::size_t m = 1; m < probs_.size(); ++m) {
    if (probs_[m] > probs_[best]) best = m;
  }
  return best;
}

double BeliefVector::sum() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

BeliefVector prior_belief(const ProcessSet& procs, const HypothesisSpace& space) {
  if (procs.count() != space.process_count()) {
    throw std::invalid_argument("hypothesis space does not match the process count");
  }
  std::vector<double> probs(space.size());
  for (const auto& h : space.hypotheses()) {
    double p = 1.0;
    for (std::size_t i = 0; i < procs.count(); ++i) {
      p *= h.is_abnormal(i) ? procs.abnormal_probs[i] : 1.0 - procs.abnormal_probs[i];
    }
    probs[h.index] = p;
  }
  return BeliefVector(std::move(probs));
}

std::size_t draw_hypothesis(const BeliefVector& prior, Rng& rng) {
  return sample_categorical(prior.probs(), rng);
}

SensorSample observe(const TrueState& state, std::size_t sensor, std::size_t time,
                     const ProcessSet& procs, Rng& rng) {
  if (sensor >= procs.count()) {
    throw std::out_of_range("sensor index " + std::to_string(sensor + 1) + " outside [1, " +
                            std::to_string(procs.count()) + "]");
  }
  const double p_one = state.current.is_abnormal(sensor) ? 1.0 - procs.flip_prob : procs.flip_prob;
  return {sensor, bernoulli(rng, p_one) ? 1 : 0, time};
}

}  // namespace adrl
