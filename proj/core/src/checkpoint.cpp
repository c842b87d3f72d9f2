#include "adrl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace adrl {

namespace {

constexpr std::string_view kMagic = "ADRLCKPT";

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void text(std::string_view s) {
    u64(s.size());
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(u8()) << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(u8()) << (8 * k);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string text() { return std::string(raw(u64())); }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw CheckpointError("checkpoint is truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_net(Writer& w, const DenseNet& net) {
  w.u32(static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& layer : net.layers()) {
    w.u32(static_cast<std::uint32_t>(layer.spec.input_dim));
    w.u32(static_cast<std::uint32_t>(layer.spec.output_dim));
    w.u8(static_cast<std::uint8_t>(layer.spec.activation));
    for (double v : layer.weights) w.f64(v);
    for (double v : layer.biases) w.f64(v);
  }
  w.f64(net.learning_rate());
  w.f64(net.decay());
}

DenseNet read_net(Reader& r) {
  const std::uint32_t count = r.u32();
  if (count == 0 || count > 64) throw CheckpointError("checkpoint has an implausible layer count");
  std::vector<LayerSpec> specs;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> params;
  for (std::uint32_t l = 0; l < count; ++l) {
    LayerSpec s;
    s.input_dim = r.u32();
    s.output_dim = r.u32();
    const std::uint8_t act = r.u8();
    if (act > static_cast<std::uint8_t>(Activation::identity)) throw CheckpointError("unknown activation code");
    s.activation = static_cast<Activation>(act);
    const std::uint64_t doubles = std::uint64_t{s.input_dim} * s.output_dim + s.output_dim;
    if (doubles > r.remaining() / 8) throw CheckpointError("checkpoint is truncated");
    std::vector<double> w(s.input_dim * s.output_dim);
    for (double& v : w) v = r.f64();
    std::vector<double> b(s.output_dim);
    for (double& v : b) v = r.f64();
    specs.push_back(s);
    params.emplace_back(std::move(w), std::move(b));
  }
  const double lr = r.f64();
  const double decay = r.f64();
  try {
    DenseNet net(specs, lr, decay);
    auto layers = net.mutable_layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].weights = std::move(params[l].first);
      layers[l].biases = std::move(params[l].second);
    }
    return net;
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("invalid network in checkpoint: ") + e.what());
  }
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  w.raw(kMagic);
  w.u32(kCheckpointVersion);
  // where the run wrote its files is not model state; dropping it keeps
  // checkpoints from identical runs byte-identical across output directories
  RunConfig cfg = ckpt.config;
  cfg.output_dir = RunConfig{}.output_dir;
  w.text(config_to_json(cfg));
  w.u64(ckpt.episodes);
  w.text(ckpt.rng_state);
  write_net(w, ckpt.actor);
  write_net(w, ckpt.critic);
  w.u32(static_cast<std::uint32_t>(ckpt.store.sensors()));
  w.u32(static_cast<std::uint32_t>(ckpt.store.hypotheses()));
  for (const auto& c : ckpt.store.all_counts()) {
    w.u64(c.total);
    w.u64(c.ones);
  }
  return w.take();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < kMagic.size() || r.raw(kMagic.size()) != kMagic) {
    throw CheckpointError("not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint format version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ckpt;
  try {
    ckpt.config = parse_config_text(r.text());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint config: ") + e.what());
  }
  ckpt.episodes = r.u64();
  ckpt.rng_state = r.text();
  ckpt.actor = read_net(r);
  ckpt.critic = read_net(r);
  const std::size_t sensors = r.u32();
  const std::size_t hypotheses = r.u32();
  if (sensors != ckpt.config.environment.count() || hypotheses != (std::size_t{1} << sensors)) {
    throw CheckpointError("checkpoint sample store does not match its environment");
  }
  std::vector<SampleStore::Counts> counts(sensors * hypotheses);
  for (auto& c : counts) {
    c.total = r.u64();
    c.ones = r.u64();
  }
  try {
    ckpt.store = SampleStore::from_counts(sensors, hypotheses, std::move(counts));
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(e.what());
  }
  if (ckpt.actor.input_dim() != hypotheses || ckpt.actor.output_dim() != sensors ||
      ckpt.critic.input_dim() != hypotheses || ckpt.critic.output_dim() != 1) {
    throw CheckpointError("checkpoint networks do not match the environment");
  }
  if (!r.done()) throw CheckpointError("trailing bytes after checkpoint");
  return ckpt;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
  const std::string bytes = serialize_checkpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_file_bytes(path));
}

}  // namespace adrl
