#include "adrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "adrl/csv.hpp"

namespace adrl {

std::vector<ValidationRow> run_validation(const DenseNet& actor, const World& world,
                                          const EstimatedDistributions& est, const TrainConfig& cfg,
                                          std::size_t block_id, Rng& rng) {
  // distinct hypotheses by partial Fisher-Yates
  std::vector<std::size_t> pool(world.hypotheses());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  const std::size_t picks = std::min(cfg.validation_set_size, pool.size());
  for (std::size_t k = 0; k < picks; ++k) {
    std::swap(pool[k], pool[k + uniform_index(rng, pool.size() - k)]);
  }

  ActorPolicy policy(actor, PolicyMode::eval);
  std::vector<ValidationRow> rows;
  rows.reserve(picks * cfg.validation_hold);
  std::size_t step = 0;
  for (std::size_t k = 0; k < picks; ++k) {
    const std::size_t m = pool[k];
    const TrueState truth{world.space[m], step};
    BeliefVector belief = world.prior;
    for (std::size_t t = 0; t < cfg.validation_hold; ++t) {
      ++step;
      const std::size_t a = policy.select(belief, est, rng);
      belief = update_posterior(belief, observe(truth, a, step, world.procs, rng), est);
      rows.push_back({block_id, step, m, belief[m]});
    }
  }
  return rows;
}

TrainResult train(const RunConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const World world(cfg.environment);
  DensityModel density(world);

  Rng init_rng = make_rng(cfg.seed, "init");
  ActorCriticAgent agent = ActorCriticAgent::create(world, cfg.learning, init_rng);
  Rng truth_rng = make_rng(cfg.seed, "train/truth");
  Rng observe_rng = make_rng(cfg.seed, "train/observe");
  Rng policy_rng = make_rng(cfg.seed, "train/policy");

  TrainResult out;
  out.episodes.reserve(cfg.training.max_episodes);
  std::size_t block = 0;
  for (std::size_t e = 1; e <= cfg.training.max_episodes; ++e) {
    const EpisodeRecord rec =
        agent.run_training_episode(world, density, cfg.training.pi_up, truth_rng, observe_rng, policy_rng);
    decay_learning_rates(agent.actor(), agent.critic());

    const TrainingEpisodeRow row{e, rec.true_hypothesis, rec.length(), rec.truncated,
                                 rec.accepted && *rec.accepted == rec.true_hypothesis};
    out.episodes.push_back(row);
    if (progress) progress(e, row);

    if (cfg.training.validation_interval > 0 && e % cfg.training.validation_interval == 0) {
      ++block;
      Rng val_rng = make_rng(cfg.seed, "validation/" + std::to_string(block));
      auto rows = run_validation(agent.actor(), world, density.estimates, cfg.training, block, val_rng);
      out.validation.insert(out.validation.end(), rows.begin(), rows.end());
    }
  }

  out.checkpoint.config = cfg;
  out.checkpoint.actor = agent.actor();
  out.checkpoint.critic = agent.critic();
  out.checkpoint.store = density.store;
  out.checkpoint.episodes = cfg.training.max_episodes;
  out.checkpoint.rng_state = rng_state(truth_rng) + "\n" + rng_state(observe_rng) + "\n" + rng_state(policy_rng);
  return out;
}

std::string policy_name(PolicyKind kind) { return kind == PolicyKind::agent ? "agent" : "chernoff"; }

CellSummary summarize(std::span<const TestEpisodeResult> results, double pi_up, double pi_low) {
  CellSummary s;
  s.pi_up = pi_up;
  s.pi_low = pi_low;
  s.episodes = results.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& r : results) {
    if (r.false_alarm) ++s.false_alarms;
    if (!r.claimed()) {
      ++s.no_claims;
      continue;
    }
    ++s.claims;
    if (!r.correct()) ++s.wrong_claims;
    const double d = static_cast<double>(r.claim_delay);
    sum += d;
    sum_sq += d * d;
  }
  if (s.claims > 0) {
    const double n = static_cast<double>(s.claims);
    s.mean_delay = sum / n;
    s.mean_loss = static_cast<double>(s.wrong_claims) / n;
    if (s.claims > 1) {
      const double var = std::max(0.0, (sum_sq - n * s.mean_delay * s.mean_delay) / (n - 1.0));
      s.delay_stderr = std::sqrt(var / n);
    }
  } else {
    s.mean_delay = std::nan("");
    s.mean_loss = std::nan("");
    s.delay_stderr = std::nan("");
  }
  return s;
}

std::uint64_t cell_seed(std::uint64_t seed, double pi_up, double pi_low) {
  return derive_seed(seed, "cell/" + format_real(pi_up) + "/" + format_real(pi_low));
}

namespace {

std::vector<TestEpisodeResult> run_cell(const Checkpoint& ckpt, const World& world, const Thresholds& thr,
                                        std::size_t episodes, std::uint64_t seed, PolicyKind kind) {
  DensityModel density(ckpt.store);
  const TestConfig& tc = ckpt.config.testing;
  ActorPolicy agent_policy(ckpt.actor, tc.agent_mode);
  ChernoffPolicy chernoff_policy(ckpt.config.chernoff, &world.oracle);
  SensorPolicy& policy = kind == PolicyKind::agent ? static_cast<SensorPolicy&>(agent_policy) : chernoff_policy;

  std::vector<TestEpisodeResult> out;
  out.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeStreams rngs = EpisodeStreams::derive(seed, e);
    out.push_back(run_test_episode(policy, world, density, thr, tc.schedule, rngs));
  }
  return out;
}

// Runs job(k) for k in [0, count) on up to hardware_concurrency threads.
template <typename Job>
void parallel_for(std::size_t count, Job job) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < count; k = next++) job(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<TestEpisodeResult> test(const Checkpoint& ckpt, const Thresholds& thr, std::size_t episodes,
                                    std::uint64_t seed, PolicyKind policy) {
  const World world(ckpt.config.environment);
  return run_cell(ckpt, world, thr, episodes, cell_seed(seed, thr.upper, thr.lower), policy);
}

SweepResult sweep(const Checkpoint& ckpt, std::span<const double> pi_up_grid, std::span<const double> pi_low_grid,
                  std::size_t episodes_per_cell, std::uint64_t seed) {
  const World world(ckpt.config.environment);
  std::vector<Thresholds> cells;
  for (double up : pi_up_grid) {
    for (double low : pi_low_grid) {
      if (low < up) cells.push_back({up, low});
    }
  }
  std::vector<std::vector<TestEpisodeResult>> results(cells.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    results[k] = run_cell(ckpt, world, cells[k], episodes_per_cell, cell_seed(seed, cells[k].upper, cells[k].lower),
                          PolicyKind::agent);
  });

  SweepResult out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out.cells.push_back(summarize(results[k], cells[k].upper, cells[k].lower));
    for (std::size_t e = 0; e < results[k].size(); ++e) {
      out.episodes.push_back({PolicyKind::agent, cells[k].upper, cells[k].lower, e, results[k][e]});
    }
  }
  return out;
}

CompareResult compare(const Checkpoint& ckpt, double pi_low, std::span<const double> pi_up_list,
                      std::size_t episodes_per_cell, std::uint64_t seed) {
  const World world(ckpt.config.environment);
  const std::size_t n = pi_up_list.size();
  std::vector<std::vector<TestEpisodeResult>> results(2 * n);
  parallel_for(2 * n, [&](std::size_t k) {
    const double up = pi_up_list[k / 2];
    const PolicyKind kind = (k % 2 == 0) ? PolicyKind::agent : PolicyKind::chernoff;
    results[k] = run_cell(ckpt, world, Thresholds{up, pi_low}, episodes_per_cell, cell_seed(seed, up, pi_low), kind);
  });

  CompareResult out;
  for (std::size_t c = 0; c < n; ++c) {
    const double up = pi_up_list[c];
    out.rows.push_back({summarize(results[2 * c], up, pi_low), summarize(results[2 * c + 1], up, pi_low)});
    for (std::size_t k = 2 * c; k < 2 * c + 2; ++k) {
      const PolicyKind kind = (k % 2 == 0) ? PolicyKind::agent : PolicyKind::chernoff;
      for (std::size_t e = 0; e < results[k].size(); ++e) {
        out.episodes.push_back({kind, up, pi_low, e, results[k][e]});
      }
    }
  }
  return out;
}

std::vector<std::size_t> episode_lengths(SensorPolicy& policy, const World& world, const EstimatedDistributions& est,
                                         double pi_up, std::size_t max_len, std::size_t episodes,
                                         std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeStreams rngs = EpisodeStreams::derive(seed, e);
    const std::size_t truth = draw_hypothesis(world.prior, rngs.truth);
    out.push_back(
        rollout_episode(policy, world, est, truth, pi_up, max_len, rngs.observe, rngs.policy).length());
  }
  return out;
}

}  // namespace adrl
