#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adrl/hypothesis_env.hpp"

namespace adrl {

// Belief entries are kept inside [kClampEps, 1 - kClampEps] so that log-odds
// stay finite.
inline constexpr double kClampEps = 1e-9;
// Laplace pseudo-count used by the smoothed Bernoulli MLE.
inline constexpr double kLaplace = 1.0;

// Per (sensor, hypothesis) estimate of P(Y = 1). Stored hypothesis-major.
class EstimatedDistributions {
 public:
  EstimatedDistributions() = default;
  // Every estimate starts at `fill`.
  EstimatedDistributions(std::size_t sensors, std::size_t hypotheses, double fill = 0.5);

  std::size_t sensors() const { return sensors_; }
  std::size_t hypotheses() const { return hypotheses_; }

  double success_prob(std::size_t sensor, std::size_t m) const { return p_one_[m * sensors_ + sensor]; }
  void set_success_prob(std::size_t sensor, std::size_t m, double p) { p_one_[m * sensors_ + sensor] = p; }

  // p(Y | F_{i,m}): the estimated g when i is in H_m, f otherwise.
  double likelihood(std::size_t sensor, std::size_t m, int value) const {
    const double p = success_prob(sensor, m);
    return value ? p : 1.0 - p;
  }

 private:
  std::size_t sensors_ = 0;
  std::size_t hypotheses_ = 0;
  std::vector<double> p_one_;
};

// True sensor laws: 1 - rho under an abnormal process, rho otherwise.
EstimatedDistributions oracle_distributions(const ProcessSet& procs, const HypothesisSpace& space);

// Sample counts of F_{i,m}: readings from sensor i collected while H_m was
// (revealed to be) true.
class SampleStore {
 public:
  struct Counts {
    std::uint64_t total = 0;
    std::uint64_t ones = 0;
    friend bool operator==(const Counts&, const Counts&) = default;
  };

  SampleStore() = default;
  SampleStore(std::size_t sensors, std::size_t hypotheses);

  std::size_t sensors() const { return sensors_; }
  std::size_t hypotheses() const { return hypotheses_; }
  std::uint64_t sample_count() const { return sample_count_; }

  const Counts& counts(std::size_t sensor, std::size_t m) const { return counts_[m * sensors_ + sensor]; }
  std::span<const Counts> all_counts() const { return counts_; }

  void add(const SensorSample& sample, std::size_t true_m);

  // (ones + a) / (total + 2a) for every cell.
  EstimatedDistributions estimates(double laplace = kLaplace) const;

  // Rebuild from serialized counts. Throws on inconsistent counts.
  static SampleStore from_counts(std::size_t sensors, std::size_t hypotheses, std::vector<Counts> counts);

  friend bool operator==(const SampleStore&, const SampleStore&) = default;

 private:
  std::size_t sensors_ = 0;
  std::size_t hypotheses_ = 0;
  std::uint64_t sample_count_ = 0;
  std::vector<Counts> counts_;
};

struct Thresholds {
  double upper = 0.8;
  double lower = 0.3;

  // Both inside (0,1) and lower < upper.
  void validate() const;
};

// One recursive Bayes step: pi_m <- pi_m * p(Y | F_{i,m}), normalized, then
// clamped into [clamp_eps, 1 - clamp_eps] with the mass taken proportionally
// from the unclamped entries. clamp_eps = 0 disables clamping.
BeliefVector update_posterior(const BeliefVector& belief, const SensorSample& sample,
                              const EstimatedDistributions& est, double clamp_eps = kClampEps);

// ln(pi_m / (1 - pi_m)).
double hypothesis_confidence(const BeliefVector& belief, std::size_t m);

// Average Bayesian log-likelihood ratio: sum_m pi_m ln(pi_m / (1 - pi_m)).
double confidence(const BeliefVector& belief);

// Index of the largest entry when it reaches thr.upper; ties go to the lowest index.
std::optional<std::size_t> check_accept(const BeliefVector& belief, const Thresholds& thr);

// True iff pi_0 <= thr.lower.
bool check_reject_null(const BeliefVector& belief, const Thresholds& thr);

// Files every sample under F_{i, true_m} and returns the refitted estimates.
EstimatedDistributions reveal_and_refit(SampleStore& store, std::span<const SensorSample> samples,
                                        std::size_t true_m);

}  // namespace adrl
