#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "adrl/agent.hpp"
#include "adrl/chernoff.hpp"
#include "adrl/episode.hpp"
#include "adrl/hypothesis_env.hpp"

namespace adrl {

// Raised for unreadable, malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  std::size_t max_episodes = 15000;
  std::size_t validation_interval = 1000;  // episodes between validation blocks; 0 disables
  std::size_t validation_hold = 200;       // steps each validation hypothesis stays true
  std::size_t validation_set_size = 3;
  double pi_up = 0.8;
};

struct TestConfig {
  TestSchedule schedule;
  std::size_t episodes_per_cell = 200;
  double pi_up = 0.8;   // single pair used by `test`
  double pi_low = 0.3;
  std::vector<double> pi_up_grid{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99};
  std::vector<double> pi_low_grid{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
  double compare_pi_low = 0.6;
  PolicyMode agent_mode = PolicyMode::eval;
};

struct RunConfig {
  ProcessSet environment{{0.2, 0.3, 0.1}, 0.2};
  LearningConfig learning;
  TrainConfig training;
  TestConfig testing;
  ChernoffConfig chernoff;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  // Throws ConfigError naming the offending field.
  void validate() const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

// Fully expanded config as pretty-printed JSON with sorted keys.
std::string config_to_json(const RunConfig& cfg);

// Documented defaults, for --help.
std::string default_config_json();

}  // namespace adrl
