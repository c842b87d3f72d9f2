#include <benchmark/benchmark.h>

#include <vector>

#include "adrl/agent.hpp"
#include "adrl/chernoff.hpp"
#include "adrl/harness.hpp"

using namespace adrl;

namespace {

const World& default_world() {
  static const World w(ProcessSet{{0.2, 0.3, 0.1}, 0.2});
  return w;
}

void BM_ActorForward(benchmark::State& state) {
  Rng rng(1);
  const DenseNet actor = build_actor(8, 3, rng);
  const auto& x = default_world().prior.probs();
  for (auto _ : state) benchmark::DoNotOptimize(actor.forward(x));
}
BENCHMARK(BM_ActorForward);

void BM_ActorStep(benchmark::State& state) {
  Rng rng(2);
  DenseNet actor = build_actor(8, 3, rng);
  StepWorkspace ws;
  const auto& x = default_world().prior.probs();
  for (auto _ : state) actor_step(actor, x, 1, 1e-3, ws);
}
BENCHMARK(BM_ActorStep);

void BM_CriticStep(benchmark::State& state) {
  Rng rng(3);
  DenseNet critic = build_critic(8, rng);
  StepWorkspace ws;
  const auto& x = default_world().prior.probs();
  for (auto _ : state) critic_step(critic, x, 0.5, ws);
}
BENCHMARK(BM_CriticStep);

void BM_UpdatePosterior(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ProcessSet procs{std::vector<double>(n, 0.2), 0.2};
  const HypothesisSpace space(n);
  const auto est = oracle_distributions(procs, space);
  BeliefVector belief = prior_belief(procs, space);
  const SensorSample sample{0, 1, 1};
  for (auto _ : state) {
    belief = update_posterior(belief, sample, est);
    benchmark::DoNotOptimize(belief);
    if (belief.max() > 0.99) belief = prior_belief(procs, space);
  }
}
BENCHMARK(BM_UpdatePosterior)->Arg(3)->Arg(6)->Arg(10);

void BM_ChernoffSelect(benchmark::State& state) {
  const auto& w = default_world();
  const ChernoffConfig cfg;
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_select(w.prior, w.oracle, cfg, rng));
}
BENCHMARK(BM_ChernoffSelect);

void BM_TrainingEpisode(benchmark::State& state) {
  const auto& w = default_world();
  Rng init(5);
  ActorCriticAgent agent = ActorCriticAgent::create(w, LearningConfig{}, init);
  DensityModel density(w);
  density.estimates = w.oracle;  // an empty store gives flat estimates and 1000-step episodes
  Rng truth(6), observe_rng(7), policy(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.run_training_episode(w, density, 0.8, truth, observe_rng, policy));
  }
}
BENCHMARK(BM_TrainingEpisode);

}  // namespace

BENCHMARK_MAIN();
