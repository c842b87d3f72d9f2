#include "adrl/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace adrl {

namespace {

// Four independent partial sums; fixed order keeps results reproducible.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

void softmax_inplace(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (double& x : v) {
    x = std::exp(x - top);
    total += x;
  }
  for (double& x : v) x /= total;
}

}  // namespace

DenseNet::DenseNet(std::vector<LayerSpec> specs, double learning_rate, double decay) {
  if (specs.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t l = 0; l < specs.size(); ++l) {
    const auto& s = specs[l];
    if (s.input_dim == 0 || s.output_dim == 0) throw std::invalid_argument("layer dimensions must be positive");
    if (l > 0 && specs[l - 1].output_dim != s.input_dim) {
      throw std::invalid_argument("layer dimensions do not chain");
    }
    if (s.activation == Activation::softmax && l + 1 != specs.size()) {
      throw std::invalid_argument("softmax is only supported on the output layer");
    }
    layers_.push_back({s, std::vector<double>(s.input_dim * s.output_dim, 0.0),
                       std::vector<double>(s.output_dim, 0.0)});
  }
  if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("learning-rate decay must lie in (0,1]");
  decay_ = decay;
  set_learning_rate(learning_rate);
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.biases.size();
  return n;
}

void DenseNet::set_learning_rate(double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be positive");
  learning_rate_ = lr;
}

void DenseNet::decay_learning_rate() { learning_rate_ = std::max(learning_rate_ * decay_, kMinLearningRate); }

void DenseNet::initialize(Rng& rng) {
  for (auto& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.spec.input_dim));
    for (double& w : layer.weights) w = (2.0 * uniform01(rng) - 1.0) * bound;
    std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
  }
}

void DenseNet::fill(double value) {
  for (auto& layer : layers_) {
    std::fill(layer.weights.begin(), layer.weights.end(), value);
    std::fill(layer.biases.begin(), layer.biases.end(), value);
  }
}

std::vector<double> DenseNet::forward(std::span<const double> input) const {
  ForwardTrace trace;
  forward(input, trace);
  return std::move(trace.outputs.back());
}

void DenseNet::forward(std::span<const double> input, ForwardTrace& trace) const {
  if (input.size() != input_dim()) throw std::invalid_argument("input width does not match the network");
  trace.outputs.resize(layers_.size() + 1);
  trace.outputs[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    const auto& x = trace.outputs[l];
    auto& y = trace.outputs[l + 1];
    const std::size_t in = layer.spec.input_dim;
    y.resize(layer.spec.output_dim);
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j] = layer.biases[j] + dot(&layer.weights[j * in], x.data(), in);
    }
    switch (layer.spec.activation) {
      case Activation::rectifier:
        for (double& v : y) v = v > 0.0 ? v : 0.0;
        break;
      case Activation::softmax:
        softmax_inplace(y);
        break;
      case Activation::identity:
        break;
    }
  }
}

Gradient DenseNet::zero_gradient() const {
  Gradient g;
  for (const auto& layer : layers_) {
    g.weights.emplace_back(layer.weights.size(), 0.0);
    g.biases.emplace_back(layer.biases.size(), 0.0);
  }
  return g;
}

void DenseNet::backward(const ForwardTrace& trace, std::span<const double> output_delta, Gradient& grad) const {
  if (output_delta.size() != output_dim()) throw std::invalid_argument("output delta width mismatch");
  bool shaped = grad.weights.size() == layers_.size() && grad.biases.size() == layers_.size();
  for (std::size_t l = 0; shaped && l < layers_.size(); ++l) {
    shaped = grad.weights[l].size() == layers_[l].weights.size() && grad.biases[l].size() == layers_[l].biases.size();
  }
  if (!shaped) grad = zero_gradient();

  std::vector<double> delta(output_delta.begin(), output_delta.end());
  std::vector<double> upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& layer = layers_[l];
    const auto& x = trace.outputs[l];
    const std::size_t in = layer.spec.input_dim;
    const std::size_t out = layer.spec.output_dim;

    auto& gw = grad.weights[l];
    auto& gb = grad.biases[l];
    for (std::size_t j = 0; j < out; ++j) {
      const double d = delta[j];
      gb[j] = d;
      double* row = &gw[j * in];
      for (std::size_t k = 0; k < in; ++k) row[k] = d * x[k];
    }
    if (l == 0) break;

    upstream.assign(in, 0.0);
    for (std::size_t j = 0; j < out; ++j) {
      const double d = delta[j];
      if (d == 0.0) continue;
      const double* row = &layer.weights[j * in];
      for (std::size_t k = 0; k < in; ++k) upstream[k] += row[k] * d;
    }
    // x is the previous layer's post-activation output
    if (layers_[l - 1].spec.activation == Activation::rectifier) {
      for (std::size_t k = 0; k < in; ++k) {
        if (!(x[k] > 0.0)) upstream[k] = 0.0;
      }
    }
    delta.swap(upstream);
  }
}

void DenseNet::apply(const Gradient& grad, double scale) {
  if (scale == 0.0) return;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    auto& w = layers_[l].weights;
    auto& b = layers_[l].biases;
    const auto& gw = grad.weights[l];
    const auto& gb = grad.biases[l];
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += scale * gw[k];
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += scale * gb[k];
  }
}

std::uint64_t DenseNet::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::vector<double>& v) {
    for (double x : v) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    }
  };
  for (const auto& layer : layers_) {
    mix(layer.weights);
    mix(layer.biases);
  }
  return h;
}

DenseNet build_actor(std::size_t hypotheses, std::size_t sensors, Rng& rng, double learning_rate, double decay) {
  DenseNet net({{hypotheses, 200, Activation::rectifier},
                {200, 200, Activation::rectifier},
                {200, sensors, Activation::softmax}},
               learning_rate, decay);
  net.initialize(rng);
  return net;
}

DenseNet build_critic(std::size_t hypotheses, Rng& rng, double learning_rate, double decay) {
  DenseNet net({{hypotheses, 200, Activation::rectifier},
                {200, 100, Activation::rectifier},
                {100, 1, Activation::identity}},
               learning_rate, decay);
  net.initialize(rng);
  return net;
}

void actor_log_prob_gradient(const DenseNet& actor, std::span<const double> state, std::size_t action,
                             StepWorkspace& ws) {
  if (action >= actor.output_dim()) throw std::out_of_range("action index out of range");
  actor.forward(state, ws.trace);
  const auto probs = ws.trace.result();
  // d ln softmax_a / d logits = onehot(a) - mu
  ws.delta.assign(probs.size(), 0.0);
  for (std::size_t k = 0; k < probs.size(); ++k) ws.delta[k] = (k == action ? 1.0 : 0.0) - probs[k];
  actor.backward(ws.trace, ws.delta, ws.grad);
}

void actor_step(DenseNet& actor, std::span<const double> state, std::size_t action, double td_error,
                StepWorkspace& ws) {
  if (!std::isfinite(td_error)) throw std::invalid_argument("actor_step: non-finite TD error");
  if (td_error == 0.0) return;
  actor_log_prob_gradient(actor, state, action, ws);
  actor.apply(ws.grad, actor.learning_rate() * td_error);
}

void critic_step(DenseNet& critic, std::span<const double> state, double target, StepWorkspace& ws) {
  if (!std::isfinite(target)) throw std::invalid_argument("critic_step: non-finite target");
  critic.forward(state, ws.trace);
  const double residual = target - ws.trace.result()[0];
  if (residual == 0.0) return;
  ws.delta.assign(1, 1.0);
  critic.backward(ws.trace, ws.delta, ws.grad);
  // d/dtheta (target - V)^2 = -2 (target - V) dV/dtheta
  critic.apply(ws.grad, 2.0 * critic.learning_rate() * residual);
}

void decay_learning_rates(DenseNet& actor, DenseNet& critic) {
  actor.decay_learning_rate();
  critic.decay_learning_rate();
}

}  // namespace adrl
