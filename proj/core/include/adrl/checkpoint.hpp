#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adrl/belief.hpp"
#include "adrl/config.hpp"
#include "adrl/neuralnet.hpp"

namespace adrl {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Everything needed to resume testing: the resolved config, both networks,
// the sample counts behind the density estimates, and RNG lineage.
struct Checkpoint {
  RunConfig config;
  DenseNet actor;
  DenseNet critic;
  SampleStore store;
  std::uint64_t episodes = 0;
  std::string rng_state;  // training streams, newline separated
};

// Layout (all integers and doubles little-endian):
//   "ADRLCKPT" u32 version
//   u64 len + resolved config JSON
//   u64 episodes, u64 len + rng state text
//   actor, critic: u32 layers, {u32 in, u32 out, u8 activation, f64 weights
//     (row-major), f64 biases}..., f64 learning_rate, f64 decay
//   store: u32 sensors, u32 hypotheses, {u64 total, u64 ones}... (hypothesis-major)
std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);
std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace adrl
