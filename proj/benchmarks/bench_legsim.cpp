// Copyright 2026 The legsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "legsim/experiments.hpp"
#include "legsim/plant.hpp"
#include "legsim/scenario.hpp"
#include "legsim/stability.hpp"
#include "legsim/trajectory.hpp"

using namespace legsim;

static void BM_PlantStep(benchmark::State& state) {
  const PlantParams p = Scenario::defaults().knee;
  PlantState s;
  s.omega_m = 1.0;
  for (auto _ : state) {
    s = step(s, 0.5, 0.1, p, 2e-5);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PlantStep);

static void BM_OuterCycle(benchmark::State& state) {
  Scenario sc = Scenario::defaults();
  LegSimulation sim(sc, sc.schedules.front().schedule, MountMode::kFixedBase);
  CpgTrajectory traj(sc.reference.gait, sc.geometry);
  sim.init_posture(traj.sample(0.0).x_des);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run_outer_cycle(traj.sample(t), Vec2{}));
    t += sim.outer_dt();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OuterCycle);

static void BM_KvsMaxNumeric(benchmark::State& state) {
  const PlantParams p = Scenario::defaults().knee;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kvs_max_numeric(p, 5.0));
  }
}
BENCHMARK(BM_KvsMaxNumeric);

static void BM_ImpactRun(benchmark::State& state) {
  Scenario sc = Scenario::defaults();
  sc.duration = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_impact_experiment(sc, 200.0));
  }
}
BENCHMARK(BM_ImpactRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
