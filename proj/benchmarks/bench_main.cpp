#include <benchmark/benchmark.h>

#include <random>

#include "blockprop/engine.hpp"
#include "blockprop/netmodel.hpp"
#include "blockprop/scenario.hpp"
#include "blockprop/simulation.hpp"

using namespace blockprop;

static void BM_EngineScheduleAndDrain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    Engine engine;
    for (std::size_t i = 0; i < n; ++i) {
      engine.schedule(Event::mining(static_cast<SimTime>(rng() % 100000), 0, kGenesis));
    }
    engine.run(StopCondition::drain(), [](const Event& e) { benchmark::DoNotOptimize(e.seq); });
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EngineScheduleAndDrain)->Arg(1 << 10)->Arg(1 << 16);

static void BM_EngineCancelHalf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Engine engine;
    std::vector<EventHandle> handles;
    handles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      handles.push_back(engine.schedule(Event::mining(static_cast<SimTime>(i), 0, kGenesis)));
    }
    for (std::size_t i = 0; i < n; i += 2) engine.cancel(handles[i]);
    engine.run(StopCondition::drain(), [](const Event&) {});
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EngineCancelHalf)->Arg(1 << 16);

static void BM_TransferDelay(benchmark::State& state) {
  const NetParams params = internet_preset(2019);
  std::uint32_t size = 1;
  for (auto _ : state) {
    for (Region a : kAllRegions) {
      for (Region b : kAllRegions) {
        benchmark::DoNotOptimize(transfer_delay(size, a, b, params));
      }
    }
    size = size * 31 + 7;
  }
  state.SetItemsProcessed(state.iterations() * kRegionCount * kRegionCount);
}
BENCHMARK(BM_TransferDelay);

static void BM_Simulation(benchmark::State& state) {
  ScenarioConfig c = preset(state.range(1) ? "cmp_2019_cbr" : "cmp_2019_legacy");
  c.node_count = static_cast<std::size_t>(state.range(0));
  c.block_count = 20;
  c.warmup_blocks = 0;
  for (auto _ : state) {
    Simulation sim(c);
    benchmark::DoNotOptimize(sim.run().events_dispatched);
  }
}
BENCHMARK(BM_Simulation)->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
