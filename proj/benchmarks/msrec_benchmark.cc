// Copyright 2026 The msrec Authors.
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

// Hot paths of one server response: posterior weights, greedy selection,
// the frugal SVD and the client fit.

#include <benchmark/benchmark.h>

#include <vector>

#include "msrec/analytics.h"
#include "msrec/frugal.h"
#include "msrec/pipeline.h"
#include "msrec/posterior.h"
#include "msrec/privacy.h"
#include "msrec/selection.h"

namespace msrec {
namespace {

const SyntheticDataset& Data() {
  static const SyntheticDataset data = SynthesizeDataset(SyntheticOptions{});
  return data;
}

const LinearReferenceModel& Model() {
  static const LinearReferenceModel model(Data().catalog, Data().train.half_split());
  return model;
}

std::vector<double> Signal(std::uint64_t seed) {
  Rng rng(seed);
  return LaplaceMechanism(Data().heldout[0].feature, NoiseParams{0.1}, rng);
}

void BM_RealUserWeights(benchmark::State& state) {
  const auto signal = Signal(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RealUserWeights(Data().train, signal, 0.1));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(Data().train.size()));
}
BENCHMARK(BM_RealUserWeights);

void BM_GreedySelect(benchmark::State& state) {
  const auto q1 = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto signal = Signal(2);
  const RealUserPosterior posterior(Data().train, signal, 0.1);
  Rng rng(3);
  std::vector<FeatureVector> samples;
  for (std::size_t i = 0; i < q1; ++i) samples.push_back(posterior.Sample(rng));
  const SampleBank bank = SampleBank::Build(Model(), samples, 100);
  const SelectionParams params{.k = k, .t = 1, .r = 100, .q1 = q1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreedySelect(bank, params, UtilityKind::kSaturating));
  }
}
BENCHMARK(BM_GreedySelect)->Args({25, 5})->Args({50, 5})->Args({25, 20});

void BM_FrugalBuild(benchmark::State& state) {
  const auto q2 = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto signal = Signal(4);
  const CapPosterior posterior(signal, 0.1, Data().train.half_split());
  Rng rng(5);
  std::vector<FeatureVector> samples;
  for (std::size_t i = 0; i < q2; ++i) samples.push_back(posterior.Sample(rng));
  const std::vector<ResultId> ids = {0, 1, 2, 3, 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildFrugalFromSamples(Model(), samples, ids, p));
  }
}
BENCHMARK(BM_FrugalBuild)->Args({200, 20})->Args({200, 39})->Args({50, 20});

void BM_ClientSelect(benchmark::State& state) {
  const auto signal = Signal(6);
  const CapPosterior posterior(signal, 0.1, Data().train.half_split());
  Rng rng(7);
  const FrugalModel frugal =
      BuildFrugal(Model(), posterior, {0, 1, 2, 3, 4}, 200, 20, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ClientSelect(frugal, Data().heldout[0].feature));
  }
}
BENCHMARK(BM_ClientSelect);

void BM_Trial(benchmark::State& state) {
  AlgorithmSpec spec;
  spec.frugal.enabled = state.range(0) != 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunTrial(spec, Model(), Data().train, Data().catalog,
                                      Data().heldout[seed % 500], seed));
    ++seed;
  }
}
BENCHMARK(BM_Trial)->Arg(0)->Arg(1);

}  // namespace
}  // namespace msrec

BENCHMARK_MAIN();
