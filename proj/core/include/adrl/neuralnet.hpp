#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adrl/rng.hpp"

namespace adrl {

enum class Activation : std::uint8_t { rectifier = 0, softmax = 1, identity = 2 };


struct LayerSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Activation activation = Activation::identity;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Fully connected layer; weights are output_dim x input_dim, row-major.
struct Layer {
  LayerSpec spec;
  std::vector<double> weights;
  std::vector<double> biases;

  friend bool operator==(const Layer&, const Layer&) = default;
};

// Same shape as the parameters of a DenseNet.
struct Gradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

// Post-activation outputs of every layer; outputs[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> outputs;
  std::span<const double> result() const { return outputs.back(); }
};

inline constexpr double kMinLearningRate = 1e-6;

// Feed-forward network with hand-written forward and backward passes.
// Softmax is only allowed on the output layer.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<LayerSpec> specs, double learning_rate, double decay = 1.0);

  std::span<const Layer> layers() const { return layers_; }
  std::span<Layer> mutable_layers() { return layers_; }
  std::size_t input_dim() const { return layers_.front().spec.input_dim; }
  std::size_t output_dim() const { return layers_.back().spec.output_dim; }
  std::size_t parameter_count() const;

  double learning_rate() const { return learning_rate_; }
  double decay() const { return decay_; }
  void set_learning_rate(double lr);
  // lr <- max(lr * decay, kMinLearningRate)
  void decay_learning_rate();

  // Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  void initialize(Rng& rng);
  void fill(double value);

  std::vector<double> forward(std::span<const double> input) const;
  void forward(std::span<const double> input, ForwardTrace& trace) const;

  // Backpropagates `output_delta`, the derivative of some scalar objective with
  // respect to the final layer's pre-activation, into parameter gradients.
  void backward(const ForwardTrace& trace, std::span<const double> output_delta, Gradient& grad) const;

  // theta <- theta + scale * grad
  void apply(const Gradient& grad, double scale);


  Gradient zero_gradient() const;

  // FNV-1a over the raw parameter bytes.
  std::uint64_t digest() const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::vector<Layer> layers_;
  double learning_rate_ = 0.0;
  double decay_ = 1.0;
};

// Reusable buffers for the per-sample update steps.
struct StepWorkspace {
  ForwardTrace trace;
  Gradient grad;
  std::vector<double> delta;
};

inline constexpr double kActorLearningRate = 0.0005;
inline constexpr double kCriticLearningRate = 0.01;

// belief(M) -> 200 ReLU -> 200 ReLU -> N softmax
DenseNet build_actor(std::size_t hypotheses, std::size_t sensors, Rng& rng,
                     double learning_rate = kActorLearningRate, double decay = 1.0);
// belief(M) -> 200 ReLU -> 100 ReLU -> 1 linear
DenseNet build_critic(std::size_t hypotheses, Rng& rng, double learning_rate = kCriticLearningRate,
                      double decay = 1.0);

// Gradient of ln mu(state)[action] with respect to all actor parameters.
void actor_log_prob_gradient(const DenseNet& actor, std::span<const double> state, std::size_t action,
                             StepWorkspace& ws);

// theta <- theta + lr * grad ln mu(state, action) * td_error.
// Throws std::invalid_argument for a non-finite td_error.
void actor_step(DenseNet& actor, std::span<const double> state, std::size_t action, double td_error,
                StepWorkspace& ws);

// One semi-gradient descent step on (target - V(state))^2.
void critic_step(DenseNet& critic, std::span<const double> state, double target, StepWorkspace& ws);

void decay_learning_rates(DenseNet& actor, DenseNet& critic);

}  // namespace adrl
