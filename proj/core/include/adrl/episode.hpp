#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "adrl/belief.hpp"
#include "adrl/hypothesis_env.hpp"
#include "adrl/rng.hpp"

namespace adrl {

// Static description of the environment shared by every episode.
struct World {
  ProcessSet procs;
  HypothesisSpace space;
  BeliefVector prior;
  EstimatedDistributions oracle;

  explicit World(ProcessSet p);

  std::size_t sensors() const { return procs.count(); }
  std::size_t hypotheses() const { return space.size(); }
};

// SampleStore plus its current fitted estimates. Estimates only change in
// reveal(), i.e. between episodes.
struct DensityModel {
  SampleStore store;
  EstimatedDistributions estimates;

  DensityModel() = default;
  explicit DensityModel(const World& world);
  explicit DensityModel(SampleStore s);

  void reveal(std::span<const SensorSample> samples, std::size_t true_m);
};

// Anything that picks a sensor (0-based) from the current belief.
class SensorPolicy {
 public:
  virtual ~SensorPolicy() = default;
  virtual std::size_t select(const BeliefVector& belief, const EstimatedDistributions& est, Rng& rng) = 0;
};

class UniformRandomPolicy final : public SensorPolicy {
 public:
  explicit UniformRandomPolicy(std::size_t sensors) : sensors_(sensors) {}
  std::size_t select(const BeliefVector&, const EstimatedDistributions&, Rng& rng) override {
    return uniform_index(rng, sensors_);
  }

 private:
  std::size_t sensors_;
};

struct Transition {
  BeliefVector state;
  std::size_t action = 0;
  double reward = 0.0;
  BeliefVector next_state;
};

// One training-style episode: starts at the prior, stops when max(pi) >= pi_up.
struct EpisodeRecord {
  std::size_t true_hypothesis = 0;
  std::vector<Transition> transitions;
  std::vector<SensorSample> samples;
  std::optional<std::size_t> accepted;
  bool truncated = false;

  std::size_t length() const { return transitions.size(); }
};

// (C^t - C) / t. Throws std::invalid_argument for t = 0.
double reward(double confidence_t, double confidence_baseline, std::size_t t);

// Which confidence the reward subtracts: the episode's initial belief, or the
// belief before the current step.
enum class RewardBaseline { initial, previous };

// Plays one episode under fixed estimates without learning or refitting.
EpisodeRecord rollout_episode(SensorPolicy& policy, const World& world, const EstimatedDistributions& est,
                              std::size_t true_m, double pi_up, std::size_t max_len, Rng& observe_rng,
                              Rng& policy_rng, RewardBaseline baseline = RewardBaseline::initial);

struct TestSchedule {
  std::size_t warmup_steps = 100;
  std::size_t max_sampling_time = 2000;
};

// Outcome of one change-point episode. Times count steps after the change.
struct TestEpisodeResult {
  std::size_t true_hypothesis = 0;
  std::optional<std::size_t> change_report_time;
  std::optional<std::size_t> accepted;
  std::size_t claim_delay = 0;  // accept time, or steps used when nothing was claimed
  bool false_alarm = false;     // a change point was reported but the truth stayed H_0
  bool truncated = false;       // no claim within max_sampling_time

  bool claimed() const { return accepted.has_value(); }
  bool correct() const { return accepted && *accepted == true_hypothesis; }
};

struct EpisodeStreams {
  Rng truth;
  Rng observe;
  Rng policy;

  // Independent per-episode streams derived from a cell seed.
  static EpisodeStreams derive(std::uint64_t seed, std::size_t episode);
};

// Change-point episode: H_0 holds for the warm-up, a new truth is drawn from
// the prior, the null is rejected once pi_0 <= pi_low (belief resets to the
// prior), and a claim is made once max(pi) >= pi_up after that report.
// Samples are revealed into `density` at the end.
TestEpisodeResult run_test_episode(SensorPolicy& policy, const World& world, DensityModel& density,
                                   const Thresholds& thr, const TestSchedule& schedule, EpisodeStreams& rngs);

}  // namespace adrl
