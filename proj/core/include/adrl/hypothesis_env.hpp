#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adrl/rng.hpp"

namespace adrl {

// Largest supported process count; M = 2^20 hypotheses.
inline constexpr std::size_t kMaxProcesses = 20;

// N independent processes. Process i is abnormal with prior probability
// abnormal_probs[i]; every sensor reports the wrong state with probability
// flip_prob.
struct ProcessSet {
  std::vector<double> abnormal_probs;
  double flip_prob = 0.2;

  std::size_t count() const { return abnormal_probs.size(); }

  // Throws std::invalid_argument when N is 0 or above kMaxProcesses, any P_i is
  // outside (0,1), or flip_prob is outside [0, 0.5).
  void validate() const;
};

// One assignment of abnormal processes. Bit i of `mask` is set when process i
// (0-based) is abnormal.
struct Hypothesis {
  std::size_t index = 0;
  std::uint32_t mask = 0;

  bool is_abnormal(std::size_t process) const { return (mask >> process) & 1U; }
  std::size_t cardinality() const;
  // 0-based member processes in ascending order.
  std::vector<std::size_t> members() const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

// All 2^N subsets, ordered by cardinality and then lexicographically by their
// member indices. For N = 3 this is {}, {1}, {2}, {3}, {1,2}, {1,3}, {2,3},
// {1,2,3}.
class HypothesisSpace {
 public:
  explicit HypothesisSpace(std::size_t process_count);

  std::size_t process_count() const { return process_count_; }
  std::size_t size() const { return hypotheses_.size(); }
  const Hypothesis& operator[](std::size_t m) const { return hypotheses_[m]; }
  std::span<const Hypothesis> hypotheses() const { return hypotheses_; }

  // Index of the hypothesis with the given abnormal mask.
  std::size_t index_of(std::uint32_t mask) const { return index_by_mask_[mask]; }

 private:
  std::size_t process_count_;
  std::vector<Hypothesis> hypotheses_;
  std::vector<std::size_t> index_by_mask_;
};

HypothesisSpace enumerate_hypotheses(std::size_t process_count);

// Probability vector over the hypotheses of a space. A plain value type; the
// Bayesian update lives in belief.hpp.
class BeliefVector {
 public:
  BeliefVector() = default;
  explicit BeliefVector(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t m) const { return probs_[m]; }
  std::span<const double> probs() const { return probs_; }
  std::vector<double>& mutable_probs() { return probs_; }

  // Lowest index among the maxima.
  std::size_t argmax() const;
  double max() const { return probs_[argmax()]; }
  double sum() const;

  friend bool operator==(const BeliefVector&, const BeliefVector&) = default;

 private:
  std::vector<double> probs_;
};

// pi_m = prod_{i in H_m} P_i * prod_{i not in H_m} (1 - P_i).
BeliefVector prior_belief(const ProcessSet& procs, const HypothesisSpace& space);

// Categorical draw of a hypothesis index from a belief; one RNG draw.
std::size_t draw_hypothesis(const BeliefVector& prior, Rng& rng);

// Hidden ground truth. Fixed until the segment ends.
struct TrueState {
  Hypothesis current;
  std::size_t change_time = 0;
};

// One binary reading. `sensor` is 0-based in memory; files print it 1-based.
struct SensorSample {
  std::size_t sensor = 0;
  int value = 0;
  std::size_t time = 0;

  friend bool operator==(const SensorSample&, const SensorSample&) = default;
};

// Y ~ Bernoulli(1 - rho) for an abnormal process, Bernoulli(rho) otherwise.
// Throws std::out_of_range for a sensor index >= N.
SensorSample observe(const TrueState& state, std::size_t sensor, std::size_t time,
                     const ProcessSet& procs, Rng& rng);

}  // namespace adrl
