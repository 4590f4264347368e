// Microbenchmarks for the hot paths: the bit mixer, slot hashing, SIC
// detection, whole simulation frames, and one agent decision epoch.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "scfsim/detection_table.hpp"
#include "scfsim/pg_agent.hpp"
#include "scfsim/phy.hpp"
#include "scfsim/rng.hpp"
#include "scfsim/sim.hpp"
#include "scfsim/slot_hash.hpp"

namespace {

using namespace scfsim;

void BM_Mix64(benchmark::State& state) {
  std::uint64_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix64(x++));
  }
}
BENCHMARK(BM_Mix64);

void BM_NormalDraw(benchmark::State& state) {
  Rng rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
}
BENCHMARK(BM_NormalDraw);

void BM_HashSlot(benchmark::State& state) {
  std::uint64_t id = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hash_slot(id++, 0x9E3779B9u, 16));
  }
}
BENCHMARK(BM_HashSlot);

void BM_SicDetectThreeSignals(benchmark::State& state) {
  PhyConfig phy;
  const std::vector<Signal> signals = {
      {0, 0, 4e-10}, {1, 0, 9e-11}, {2, 1, 2e-12}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sic_detect(signals, phy));
  }
}
BENCHMARK(BM_SicDetectThreeSignals);

void BM_TableSample(benchmark::State& state) {
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DetectionTable::sample(2, 1, 0, rng));
  }
}
BENCHMARK(BM_TableSample);

// One full frame of the default 16-device network with physical-layer
// detection under a fixed broadcast.
void BM_SimFramePhysical(benchmark::State& state) {
  SimConfig cfg;
  cfg.detection = DetectionMode::Physical;
  cfg.lambda = 1.0;
  Simulation sim(cfg);
  ActionValues actions;
  actions.access_prob = {0.5, 0.5};
  actions.seed_value = {0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.step(actions));
  }
}
BENCHMARK(BM_SimFramePhysical);

// One full frame of a small network with table-driven detection (the
// table caps concurrency at 3 per cluster, so 3+3 devices never exceed
// its domain).
void BM_SimFrameTable(benchmark::State& state) {
  SimConfig cfg;
  cfg.clusters = {{450.0, 25.0, 3}, {900.0, 25.0, 3}};
  cfg.lambda = 0.5;
  Simulation sim(cfg);
  ActionValues actions;
  actions.access_prob = {0.5, 0.5};
  actions.seed_value = {0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.step(actions));
  }
}
BENCHMARK(BM_SimFrameTable);

// One agent decision epoch: reward, TD error, value + policy updates,
// fresh action sampling.
void BM_AgentStep(benchmark::State& state) {
  PgAgent agent(2, {true, false}, 17, RewardKind::R1);
  Rng rng(2024);
  agent.begin(rng);
  const std::vector<std::uint32_t> epoch = {2, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.step(epoch, 3, rng));
  }
}
BENCHMARK(BM_AgentStep);

}  // namespace

BENCHMARK_MAIN();
