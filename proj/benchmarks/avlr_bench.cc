// Copyright 2026 The AVLR Authors. All Rights Reserved.
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

#include "avlr/datagen.h"
#include "avlr/metrics.h"
#include "avlr/model.h"
#include "avlr/pipeline.h"
#include "avlr/refine.h"

namespace avlr {
namespace {

struct Fixture {
  Corpus corpus;
  ModelParams params;

  static const Fixture& Get() {
    static const Fixture f = [] {
      CorpusSpec spec;
      spec.num_train_events = 64;
      spec.num_val_events = 0;
      spec.num_test_events = 16;
      spec.num_background = 8;
      Rng rng(spec.seed);
      Fixture out{GenerateCorpus(spec, rng), InitialParams(ModelConfig{}, false)};
      return out;
    }();
    return f;
  }
};

void BM_ForwardScores(benchmark::State& state) {
  const Fixture& f = Fixture::Get();
  const FeatureVideo& v = f.corpus.train.front();
  for (auto _ : state) benchmark::DoNotOptimize(ForwardScores(f.params, v));
}
BENCHMARK(BM_ForwardScores);

void BM_MilLoss(benchmark::State& state) {
  const Fixture& f = Fixture::Get();
  const FeatureVideo& v = f.corpus.train.front();
  for (auto _ : state) benchmark::DoNotOptimize(MilLoss(f.params, v));
}
BENCHMARK(BM_MilLoss);

void BM_AuxLoss(benchmark::State& state) {
  const Fixture& f = Fixture::Get();
  const FeatureVideo& v = f.corpus.train.front();
  Rng rng(3);
  const FeatureVideo& partner = DisjointPartner(f.corpus.train, v, rng);
  const auto schedule = WindowSchedule::Make(10, static_cast<int>(state.range(0)),
                                             static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(AuxLoss(f.params, v, partner, schedule));
  state.counters["T1"] = schedule.num_windows();
}
BENCHMARK(BM_AuxLoss)->Args({2, 2})->Args({3, 1})->Args({4, 2});

void BM_RefineCorpus(benchmark::State& state) {
  const Fixture& f = Fixture::Get();
  const auto schedule = WindowSchedule::Make(10, 4, 2);
  const auto predictor = ModelPredictor(f.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RefineCorpus(predictor, f.corpus.train, schedule, 0.05, Rng(1),
                                          static_cast<unsigned>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.corpus.train.size()));
}
BENCHMARK(BM_RefineCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LabelSetIdentity(benchmark::State& state) {
  const std::vector<ClassId> yi = {7, 1, 1, 1, 7, 7, 2, 2, 7, 7};
  const std::vector<ClassId> yj = {7, 7, 3, 3, 3, 7, 7, 7, 7, 7};
  const LabelSet li{1, 2}, lj{3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(LabelSetIdentity(li, lj, Window{3, 6}, yi, yj, 6));
  }
}
BENCHMARK(BM_LabelSetIdentity);

void BM_EvaluateModel(benchmark::State& state) {
  const Fixture& f = Fixture::Get();
  for (auto _ : state) benchmark::DoNotOptimize(EvaluateModel(f.params, f.corpus.test));
}
BENCHMARK(BM_EvaluateModel);

}  // namespace
}  // namespace avlr

BENCHMARK_MAIN();
