// Copyright 2026 The spinperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "spinperc/geometry.hpp"
#include "spinperc/glauber.hpp"
#include "spinperc/random_fields.hpp"

namespace spinperc {
namespace {

void BM_SampleMarks(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const BoxRegion box({0, 0}, n, n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    MarkSet marks = sample_marks(box, 1.0, 1, 7, rep++);
    benchmark::DoNotOptimize(marks.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.size()));
}
BENCHMARK(BM_SampleMarks)->Arg(32)->Arg(128);

void BM_Evolve(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const BoxRegion box({0, 0}, n, n);
  const GlauberParams params{1.0, 1.0, 1};
  const SeedField seeds = sample_seed_field(box, 7, 0);
  const MarkSet marks = sample_marks(box, params.horizon, 1, 7, 0);
  for (auto _ : state) {
    SpinField f = evolve(seeds, marks, 0.5, params, BoundaryCondition::kFree, box);
    benchmark::DoNotOptimize(f.count_plus());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(marks.size()));
}
BENCHMARK(BM_Evolve)->Arg(32)->Arg(128);

void BM_MinRhoMap(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const BoxRegion box({0, 0}, n, n);
  const GlauberParams params{3.0, 2.0, 1};
  const SeedField seeds = sample_seed_field(box, 7, 0);
  const MarkSet marks = sample_marks(box, params.horizon, 1, 7, 0);
  for (auto _ : state) {
    ThresholdField t = min_rho_map(seeds, marks, params, BoundaryCondition::kFree, box);
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_MinRhoMap)->Arg(32)->Arg(64);

void BM_LabelClusters(benchmark::State& state) {
  const auto n = static_cast<std::int32_t>(state.range(0));
  const BoxRegion box({0, 0}, n, n);
  const SpinField f = initial_field(sample_seed_field(box, 9, 0), 0.5927);
  for (auto _ : state) {
    ClusterLabels labels = label_clusters(f, Connectivity::kPlus4);
    benchmark::DoNotOptimize(labels);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.size()));
}
BENCHMARK(BM_LabelClusters)->Arg(64)->Arg(256);

}  // namespace
}  // namespace spinperc

BENCHMARK_MAIN();
