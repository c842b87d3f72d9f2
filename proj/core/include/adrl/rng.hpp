#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace adrl {

// std::mt19937_64 is fully specified by the standard, so its output stream
// (and its textual state) is identical on every conforming platform. The
// helpers below avoid std::*_distribution, whose algorithms are not.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng& rng);

// Uniform index in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

bool bernoulli(Rng& rng, double p);

// Categorical draw by inverse CDF. Weights need not be normalized; they must
// be nonnegative with a positive sum. Consumes exactly one draw.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

// Seed splitting: splitmix64(seed ^ fnv1a64(component)). Adding a component
// never perturbs the stream of an existing one.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view component);

Rng make_rng(std::uint64_t seed, std::string_view component);

std::string rng_state(const Rng& rng);
Rng rng_from_state(const std::string& state);

}  // namespace adrl
