#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "esrinet/esrinet.hpp"

namespace {

struct Model {
  esrinet::SynthNetwork synth;
  esrinet::ProductionFunctionSet pf;
  std::vector<std::string> ets;
};

// Networks are cached per size; generation is not what is being measured.
const Model& model(std::size_t n_firms) {
  static std::map<std::size_t, std::unique_ptr<Model>> cache;
  auto& slot = cache[n_firms];
  if (!slot) {
    esrinet::SynthParams p;
    p.n_firms = n_firms;
    p.n_edges = 5 * n_firms;
    p.n_ets = std::min<std::size_t>(200, n_firms / 10);
    p.seed = 7;
    slot = std::make_unique<Model>();
    slot->synth = esrinet::generate(p);
    slot->pf = esrinet::calibrate(slot->synth.network, slot->synth.essentiality, {});
    slot->ets = esrinet::ets_candidates(slot->synth.network);
  }
  return *slot;
}

void BM_Propagate(benchmark::State& state) {
  const auto& m = model(static_cast<std::size_t>(state.range(0)));
  esrinet::PropagationOptions opt;
  opt.demand = state.range(1) ? esrinet::DemandShock::kCascade : esrinet::DemandShock::kRemovedOnly;
  esrinet::Propagator engine(m.synth.network, m.pf, opt);
  const auto scenario = esrinet::ShockScenario::from_ids(m.synth.network, std::vector<std::string>{m.ets.front()});
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto eq = engine.run(scenario);
    iterations = eq.iterations;
    benchmark::DoNotOptimize(eq.levels.h.data());
  }
  state.counters["fixed_point_iterations"] = static_cast<double>(iterations);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.synth.network.num_edges()));
}
BENCHMARK(BM_Propagate)->ArgsProduct({{1000, 10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BatchIndices(benchmark::State& state) {
  const auto& m = model(static_cast<std::size_t>(state.range(0)));
  esrinet::BatchOptions opt;
  opt.threads = static_cast<unsigned>(state.range(1));
  const std::vector<std::string> candidates(m.ets.begin(), m.ets.begin() + std::min<std::size_t>(20, m.ets.size()));
  for (auto _ : state) {
    auto table = esrinet::batch_indices(m.synth.network, m.pf, candidates, opt);
    benchmark::DoNotOptimize(table.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(candidates.size()));
}
BENCHMARK(BM_BatchIndices)->ArgsProduct({{10000, 100000}, {1, 2, 4}})->Unit(benchmark::kMillisecond);

void BM_Calibrate(benchmark::State& state) {
  const auto& m = model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto pf = esrinet::calibrate(m.synth.network, m.synth.essentiality, {});
    benchmark::DoNotOptimize(pf.firms().data());
  }
}
BENCHMARK(BM_Calibrate)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  esrinet::SynthParams p;
  p.n_firms = static_cast<std::size_t>(state.range(0));
  p.n_edges = 5 * p.n_firms;
  p.n_ets = p.n_firms / 20;
  for (auto _ : state) {
    auto s = esrinet::generate(p);
    benchmark::DoNotOptimize(s.network.num_edges());
  }
}
BENCHMARK(BM_Generate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
