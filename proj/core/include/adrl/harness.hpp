#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "adrl/agent.hpp"
#include "adrl/checkpoint.hpp"
#include "adrl/chernoff.hpp"
#include "adrl/config.hpp"
#include "adrl/episode.hpp"

namespace adrl {

struct ValidationRow {
  std::size_t block_id = 0;
  std::size_t step = 0;        // 1-based within the block
  std::size_t hypothesis = 0;  // hypothesis currently true
  double posterior = 0.0;      // its posterior after this step
};

struct TrainingEpisodeRow {
  std::size_t episode = 0;
  std::size_t true_hypothesis = 0;
  std::size_t length = 0;
  bool truncated = false;
  bool correct = false;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<ValidationRow> validation;
  std::vector<TrainingEpisodeRow> episodes;
};

// Frozen-policy validation block: `validation_set_size` distinct hypotheses,
// each held true for `validation_hold` steps starting from the prior belief,
// with sensors chosen by the argmax policy. Networks and estimates are read
// only.
std::vector<ValidationRow> run_validation(const DenseNet& actor, const World& world,
                                          const EstimatedDistributions& est, const TrainConfig& cfg,
                                          std::size_t block_id, Rng& rng);

using ProgressFn = std::function<void(std::size_t episode, const TrainingEpisodeRow& row)>;

// Actor-critic training over cfg.training.max_episodes episodes with periodic
// validation.
TrainResult train(const RunConfig& cfg, const ProgressFn& progress = {});

enum class PolicyKind { agent, chernoff };

std::string policy_name(PolicyKind kind);

struct EpisodeMetrics {
  PolicyKind policy = PolicyKind::agent;
  double pi_up = 0.0;
  double pi_low = 0.0;
  std::size_t episode = 0;
  TestEpisodeResult result;
};

struct CellSummary {
  double pi_up = 0.0;
  double pi_low = 0.0;
  std::size_t episodes = 0;
  std::size_t claims = 0;
  std::size_t wrong_claims = 0;
  std::size_t no_claims = 0;
  std::size_t false_alarms = 0;
  double mean_delay = 0.0;    // over claimed episodes
  double delay_stderr = 0.0;
  double mean_loss = 0.0;     // wrong claims / claims

  double no_claim_rate() const { return episodes ? double(no_claims) / double(episodes) : 0.0; }
  double false_alarm_rate() const { return episodes ? double(false_alarms) / double(episodes) : 0.0; }
};

CellSummary summarize(std::span<const TestEpisodeResult> results, double pi_up, double pi_low);

// Seed of one (pi_up, pi_low) cell; identical for every policy so the runs are
// paired.
std::uint64_t cell_seed(std::uint64_t seed, double pi_up, double pi_low);

// Runs `episodes` change-point episodes at one threshold pair on a private
// copy of the checkpoint's sample store.
std::vector<TestEpisodeResult> test(const Checkpoint& ckpt, const Thresholds& thr, std::size_t episodes,
                                    std::uint64_t seed, PolicyKind policy = PolicyKind::agent);

struct SweepResult {
  std::vector<CellSummary> cells;
  std::vector<EpisodeMetrics> episodes;
};

// All pairs with pi_low < pi_up, in pi_up-major order. Cells run in parallel.
SweepResult sweep(const Checkpoint& ckpt, std::span<const double> pi_up_grid, std::span<const double> pi_low_grid,
                  std::size_t episodes_per_cell, std::uint64_t seed);

struct CompareRow {
  CellSummary agent;
  CellSummary chernoff;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<EpisodeMetrics> episodes;
};

// Agent and Chernoff on identical cell seeds for each pi_up at a fixed pi_low.
// pi_low is only the null-rejection level here, so pi_low >= pi_up is allowed.
CompareResult compare(const Checkpoint& ckpt, double pi_low, std::span<const double> pi_up_list,
                      std::size_t episodes_per_cell, std::uint64_t seed);

// Training-style episode lengths (start at the prior, stop at max(pi) >= pi_up)
// under frozen estimates. Truth draws and noise depend only on (seed, episode).
std::vector<std::size_t> episode_lengths(SensorPolicy& policy, const World& world, const EstimatedDistributions& est,
                                         double pi_up, std::size_t max_len, std::size_t episodes,
                                         std::uint64_t seed);

}  // namespace adrl
