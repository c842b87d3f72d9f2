// adrl: train, test and compare active anomaly-detection agents.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "adrl/checkpoint.hpp"
#include "adrl/config.hpp"
#include "adrl/csv.hpp"
#include "adrl/harness.hpp"

namespace fs = std::filesystem;
using namespace adrl;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string checkpoint;
  std::string out_dir;
  std::optional<std::size_t> episodes;
  bool quiet = false;
};

void log(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << '\n' << std::flush;
}

RunConfig base_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : parse_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  return cfg;
}

// Config for the evaluation commands: environment and learning come from the
// checkpoint; testing, chernoff, seed and output from --config and flags.
Checkpoint load_for_eval(const Options& opt, RunConfig& cfg) {
  Checkpoint ckpt = load_checkpoint(opt.checkpoint);
  if (opt.config_path.empty()) {
    cfg = ckpt.config;
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  } else {
    cfg = base_config(opt);
    if (cfg.environment.abnormal_probs != ckpt.config.environment.abnormal_probs ||
        cfg.environment.flip_prob != ckpt.config.environment.flip_prob) {
      throw ConfigError("environment: does not match the checkpoint's environment");
    }
    cfg.learning = ckpt.config.learning;
    cfg.training = ckpt.config.training;
  }
  if (opt.episodes) cfg.testing.episodes_per_cell = *opt.episodes;
  cfg.validate();
  ckpt.config.testing = cfg.testing;
  ckpt.config.chernoff = cfg.chernoff;
  return ckpt;
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_text_file(dir / "resolved_config.json", config_to_json(cfg));
  return dir;
}

std::string describe(const CellSummary& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "pi_up=%s pi_low=%s episodes=%zu claims=%zu mean_delay=%s mean_loss=%s no_claim=%zu",
                format_real(c.pi_up).c_str(), format_real(c.pi_low).c_str(), c.episodes, c.claims,
                format_real(c.mean_delay).c_str(), format_real(c.mean_loss).c_str(), c.no_claims);
  return buf;
}

int cmd_train(const Options& opt) {
  RunConfig cfg = base_config(opt);
  if (opt.episodes) cfg.training.max_episodes = *opt.episodes;
  cfg.validate();
  const fs::path dir = prepare_output(cfg);

  const std::size_t every = cfg.training.validation_interval ? cfg.training.validation_interval : 1000;
  std::size_t window_len = 0, window_n = 0;
  TrainResult res = train(cfg, [&](std::size_t episode, const TrainingEpisodeRow& row) {
    window_len += row.length;
    ++window_n;
    if (episode % every == 0) {
      log(opt, "episode " + std::to_string(episode) + " mean_len " + format_real(double(window_len) / double(window_n)));
      window_len = window_n = 0;
    }
  });

  save_checkpoint(res.checkpoint, dir / "ckpt");
  write_text_file(dir / "validation.csv", validation_csv(res.validation));
  write_text_file(dir / "training.csv", training_csv(res.episodes));
  log(opt, "wrote " + (dir / "ckpt").string());
  return kOk;
}

int cmd_test(const Options& opt) {
  RunConfig cfg;
  Checkpoint ckpt = load_for_eval(opt, cfg);
  if (!(cfg.testing.pi_low < cfg.testing.pi_up)) throw ConfigError("testing.pi_low: must be below testing.pi_up");
  const fs::path dir = prepare_output(cfg);

  const Thresholds thr{cfg.testing.pi_up, cfg.testing.pi_low};
  const auto results = test(ckpt, thr, cfg.testing.episodes_per_cell, cfg.seed);
  std::vector<EpisodeMetrics> rows;
  for (std::size_t e = 0; e < results.size(); ++e) rows.push_back({PolicyKind::agent, thr.upper, thr.lower, e, results[e]});
  const CellSummary cell = summarize(results, thr.upper, thr.lower);
  write_text_file(dir / "metrics.csv", metrics_csv(rows));
  write_text_file(dir / "grid.csv", grid_csv(std::span(&cell, 1)));
  log(opt, describe(cell));
  return kOk;
}

int cmd_sweep(const Options& opt) {
  RunConfig cfg;
  Checkpoint ckpt = load_for_eval(opt, cfg);
  const fs::path dir = prepare_output(cfg);

  const SweepResult res =
      sweep(ckpt, cfg.testing.pi_up_grid, cfg.testing.pi_low_grid, cfg.testing.episodes_per_cell, cfg.seed);
  write_text_file(dir / "grid.csv", grid_csv(res.cells));
  write_text_file(dir / "metrics.csv", metrics_csv(res.episodes));
  log(opt, "wrote " + std::to_string(res.cells.size()) + " cells to " + (dir / "grid.csv").string());
  return kOk;
}

int cmd_compare(const Options& opt) {
  RunConfig cfg;
  Checkpoint ckpt = load_for_eval(opt, cfg);
  const fs::path dir = prepare_output(cfg);

  const CompareResult res =
      compare(ckpt, cfg.testing.compare_pi_low, cfg.testing.pi_up_grid, cfg.testing.episodes_per_cell, cfg.seed);
  write_text_file(dir / "compare.csv", compare_csv(res.rows));
  write_text_file(dir / "metrics.csv", metrics_csv(res.episodes));
  for (const auto& row : res.rows) {
    log(opt, "agent    " + describe(row.agent));
    log(opt, "chernoff " + describe(row.chernoff));
  }
  return kOk;
}

int cmd_validate_checkpoint(const Options& opt) {
  const std::string bytes = read_file_bytes(opt.checkpoint);
  const Checkpoint ckpt = deserialize_checkpoint(bytes);
  if (serialize_checkpoint(ckpt) != bytes) {
    std::cerr << "error: checkpoint does not round-trip byte-identically\n";
    return kRuntime;
  }
  std::cout << "checkpoint ok: version " << kCheckpointVersion << ", " << ckpt.episodes << " episodes\n"
            << "actor parameters: " << ckpt.actor.parameter_count() << '\n'
            << "critic parameters: " << ckpt.critic.parameter_count() << '\n'
            << "samples: " << ckpt.store.sample_count() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Actor-critic sensor selection for active anomaly detection"};
  app.footer("Config defaults (JSON; unknown keys are errors):\n" + default_config_json() +
             "\nExit codes: 0 ok, 1 usage, 2 config error, 3 runtime error");
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out-dir", opt.out_dir, "Output directory (default: config output_dir, \"out\")");
    sub->add_option("--episodes", opt.episodes, "Training episodes, or episodes per threshold cell");
    sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
  };
  auto add_checkpoint = [&opt](CLI::App* sub) {
    sub->add_option("--checkpoint", opt.checkpoint, "Checkpoint written by train")->required();
  };

  auto* train_cmd = app.add_subcommand("train", "Train the actor-critic agent; writes ckpt, validation.csv, training.csv");
  add_common(train_cmd);
  auto* test_cmd = app.add_subcommand("test", "Change-point test at testing.pi_up / testing.pi_low; writes metrics.csv");
  add_common(test_cmd);
  add_checkpoint(test_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Test over the threshold grid; writes grid.csv, metrics.csv");
  add_common(sweep_cmd);
  add_checkpoint(sweep_cmd);
  auto* compare_cmd =
      app.add_subcommand("compare", "Agent vs. Chernoff test at testing.compare_pi_low; writes compare.csv");
  add_common(compare_cmd);
  add_checkpoint(compare_cmd);
  auto* validate_cmd = app.add_subcommand("validate-checkpoint", "Check checkpoint round-trip and print sizes");
  add_checkpoint(validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*train_cmd) return cmd_train(opt);
    if (*test_cmd) return cmd_test(opt);
    if (*sweep_cmd) return cmd_sweep(opt);
    if (*compare_cmd) return cmd_compare(opt);
    if (*validate_cmd) return cmd_validate_checkpoint(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
