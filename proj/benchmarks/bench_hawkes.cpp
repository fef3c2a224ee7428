#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "hawkes/estimate.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"

namespace {

using namespace hawkes;

HawkesModel bivariate_model() {
  KernelParams p;
  p.mu = {0.024, 0.044};
  p.alpha = {{0.382, 0.387}, {0.218, 0.343}};
  p.omega = 0.1;
  return HawkesModel::linear(p);
}

const EventSequence& cached_sequence(double horizon) {
  static const HawkesModel model = bivariate_model();
  static std::map<double, EventSequence> cache;
  auto it = cache.find(horizon);
  if (it == cache.end()) {
    it = cache.emplace(horizon, simulate_ogata(model, horizon, 42)).first;
  }
  return it->second;
}

void bm_simulate(benchmark::State& state) {
  const HawkesModel model = bivariate_model();
  const double horizon = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ogata(model, horizon, seed++).size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(horizon));
}
BENCHMARK(bm_simulate)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_log_likelihood(benchmark::State& state) {
  const HawkesModel model = bivariate_model();
  const EventSequence seq = cached_sequence(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood(model, seq, CompensatorMethod::ClosedForm));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.size()));
}
BENCHMARK(bm_log_likelihood)->Arg(10000)->Arg(100000);

void bm_stochastic_gradient(benchmark::State& state) {
  const HawkesModel model = bivariate_model();
  const EventSequence seq = cached_sequence(100000.0);
  const int n_samples = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const StochasticNll nll(
        seq, StochasticNll::draw_samples(model.dim(), seq.horizon(), n_samples, seed++),
        ModelMode::Linear, LinkSpec::identity());
    benchmark::DoNotOptimize(nll.value_and_gradient(model.params).first);
  }
}
BENCHMARK(bm_stochastic_gradient)->Arg(100)->Arg(500)->Arg(2000);

void bm_rescale_times(benchmark::State& state) {
  const HawkesModel model = bivariate_model();
  const EventSequence seq = cached_sequence(100000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rescale_times(model, seq, 0).taus.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.count_of(0)));
}
BENCHMARK(bm_rescale_times);

void bm_intensity_path(benchmark::State& state) {
  const HawkesModel model = bivariate_model();
  const EventSequence seq = cached_sequence(10000.0);
  std::vector<double> grid;
  for (double t = 0.0; t <= 10000.0; t += 1.0) grid.push_back(t);
  for (auto _ : state) {
    benchmark::DoNotOptimize(intensity_path(model, seq, grid).values.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(bm_intensity_path);

} // namespace

BENCHMARK_MAIN();
