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

#include "avlr/pipeline.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "avlr/errors.h"
#include "testing/oracles.h"

namespace avlr {
namespace {

ModelConfig TinyModel() {
  ModelConfig m;
  m.audio_dim = 3;
  m.visual_dim = 2;
  m.hidden = 6;
  m.num_events = 3;
  m.context_radius = 1;
  return m;
}

ModelParams RandomParams(const ModelConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  ModelParams p = ModelParams::Random(config, rng);
  for (auto idx : {ModelParams::kB1, ModelParams::kB2}) {
    for (double& x : p.tensors()[idx].data()) x = 0.1 * rng.Normal();
  }
  return p;
}

// A pair of videos with disjoint event sets.
std::pair<FeatureVideo, FeatureVideo> DisjointPair(int t, int c, int da, int dv, Rng& rng) {
  for (;;) {
    auto a = testing::RandomVideo("a", t, c, da, dv, rng);
    auto b = testing::RandomVideo("b", t, c, da, dv, rng);
    if (a.events().DisjointFrom(b.events())) return {std::move(a), std::move(b)};
  }
}

Corpus TinyCorpus(std::uint64_t seed = 1) {
  CorpusSpec spec;
  spec.num_train_events = 24;
  spec.num_val_events = 0;
  spec.num_test_events = 8;
  spec.num_background = 4;
  spec.audio_dim = 3;
  spec.visual_dim = 2;
  spec.num_events = 3;
  spec.seed = seed;
  Rng rng(seed);
  return GenerateCorpus(spec, rng);
}

TrainConfig TinyTrain() {
  TrainConfig t;
  t.stage1_epochs = 6;
  t.stage3_epochs = 4;
  t.batch_size = 8;
  t.learning_rate = 0.01;
  return t;
}

TEST(AuxLoss, OverlappingLabelsArePreconditionError) {
  Rng rng(1);
  const auto a = testing::VideoWithLabels("a", {1, 1, 4, 4, 4, 4}, 3, 2, rng);
  const auto b = testing::VideoWithLabels("b", {4, 4, 1, 1, 4, 4}, 3, 2, rng);
  ModelConfig m = TinyModel();
  m.audio_dim = m.visual_dim = 2;
  EXPECT_THROW(AuxLoss(ModelParams::Zeros(m), a, b, WindowSchedule::Make(6, 2, 2)),
               PreconditionError);
}

TEST(AuxLoss, SingleFullWindowIsPreconditionError) {
  Rng rng(1);
  const auto a = testing::VideoWithLabels("a", {1, 1, 4, 4, 4, 4}, 3, 2, rng);
  const auto b = testing::VideoWithLabels("b", {4, 4, 2, 2, 4, 4}, 3, 2, rng);
  ModelConfig m = TinyModel();
  m.audio_dim = m.visual_dim = 2;
  EXPECT_THROW(AuxLoss(ModelParams::Zeros(m), a, b, WindowSchedule::Make(6, 6, 1)),
               PreconditionError);
  EXPECT_THROW(AuxLoss(ModelParams::Zeros(m), a, b, WindowSchedule::Make(6, 4, 2)),
               PreconditionError);
}

TEST(AuxLoss, OracleScoresGivePerfectMultiHotLoss) {
  // Audio features are one-hot class indicators, background segments are
  // zero, and the network copies indicator c to score column c.
  ModelConfig m;
  m.audio_dim = 4;
  m.visual_dim = 1;
  m.hidden = 4;
  m.num_events = 3;
  m.context_radius = 0;
  const double big = 50.0;
  ParamSet t = ModelParams::Zeros(m).tensors();
  for (std::size_t i = 0; i < 4; ++i) t[ModelParams::kW1](i, i) = 1.0;
  for (std::size_t c = 0; c < 3; ++c) t[ModelParams::kW2](c, c) = big;
  const ModelParams params = ModelParams::FromTensors(m, t);
  auto make = [](const std::string& id, std::vector<int> y) {
    FeatureVideo v;
    v.id = id;
    v.audio = Matrix(y.size(), 4);
    v.visual = Matrix(y.size(), 1);
    for (std::size_t s = 0; s < y.size(); ++s) {
      if (y[s] <= 3) v.audio(s, static_cast<std::size_t>(y[s] - 1)) = 1.0;
    }
    v.segment_labels = std::move(y);
    v.video_label = VideoLabelFromSegments(v.segment_labels, 3);
    return v;
  };
  const auto primary = make("p", {1, 1, 4, 4, 4, 4});
  const auto partner = make("q", {4, 4, 2, 2, 4, 4});
  const double loss = AuxLoss(params, primary, partner, WindowSchedule::Make(6, 2, 2)).loss;
  // Two of four classes share the mass: 2 * ln 2 / 4, up to the probability clamp.
  EXPECT_NEAR(loss, std::log(2.0) / 2.0, 1e-6);
}

TEST(AuxLoss, MatchesFiniteDifferences) {
  const ModelConfig m = TinyModel();
  const auto schedule = WindowSchedule::Make(6, 2, 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ModelParams params = RandomParams(m, seed);
    Rng rng(500 + seed);
    const auto [a, b] = DisjointPair(6, 3, 3, 2, rng);
    const LossAndGrad lg = AuxLoss(params, a, b, schedule);
    auto loss = [&](const ParamSet& p) {
      return AuxLoss(ModelParams::FromTensors(m, p), a, b, schedule).loss;
    };
    const auto report = GradCheck(loss, params.tensors(), lg.grads, 1e-4);
    EXPECT_TRUE(report.passed) << "seed " << seed << " err " << report.max_rel_error;
  }
}

TEST(AuxTarget, WindowUnionRecoversBothLabelSets) {
  Rng rng(77);
  for (int t = 3; t <= 12; ++t) {
    for (int n = 1; 2 * n < t + 1; ++n) {
      for (int s = 1; s <= n; ++s) {
        if ((t - n) % s != 0) continue;
        const auto schedule = WindowSchedule::Make(t, n, s);
        for (int trial = 0; trial < 20; ++trial) {
          auto a = testing::RandomVideo("a", t, 5, 1, 1, rng, false);
          auto b = testing::RandomVideo("b", t, 5, 1, 1, rng, false);
          if (!a.events().DisjointFrom(b.events())) continue;
          LabelSet seen;
          for (std::size_t k = 0; k < schedule.starts().size(); ++k) {
            seen = seen.Union(ComposeSynthetic(a, b, schedule.window(k)).video.events());
          }
          EXPECT_EQ(seen, a.events().Union(b.events())) << "T=" << t << " N=" << n;
        }
      }
    }
  }
}

TEST(LabelRefinementLoss, FullWindowDummyEqualsMil) {
  const ModelConfig m = TinyModel();
  Rng rng(3);
  std::vector<FeatureVideo> videos;
  for (int i = 0; i < 5; ++i) videos.push_back(testing::RandomVideo("v" + std::to_string(i), 6, 3, 3, 2, rng));
  const ModelParams params = RandomParams(m, 4);
  for (int s : {1, 3}) {
    const auto dummy = DummyRefinedLabels(videos, WindowSchedule::Make(6, 6, s), 3);
    for (const auto& v : videos) {
      const LossAndGrad lr = LabelRefinementLoss(params, v, dummy);
      const LossAndGrad mil = MilLoss(params, v);
      EXPECT_DOUBLE_EQ(lr.loss, mil.loss);
      for (std::size_t k = 0; k < mil.grads.size(); ++k) {
        for (std::size_t i = 0; i < mil.grads[k].size(); ++i) {
          EXPECT_DOUBLE_EQ(lr.grads[k].data()[i], mil.grads[k].data()[i]);
        }
      }
    }
  }
}

RefinedLabels RandomRefined(const std::vector<FeatureVideo>& videos, const WindowSchedule& sched,
                            int c, Rng& rng) {
  RefinedLabels out(sched, 0.05, c);
  for (const auto& v : videos) {
    for (int t1 : sched.starts()) {
      LabelSet set;
      for (int k = 1; k <= c; ++k) {
        if (rng.Uniform() < 0.3) set.Insert(k);
      }
      out.Set(v.id, t1, LabelVector(c, set));
    }
  }
  return out;
}

TEST(LabelRefinementLoss, MatchesFiniteDifferences) {
  const ModelConfig m = TinyModel();
  const auto schedule = WindowSchedule::Make(6, 2, 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ModelParams params = RandomParams(m, seed);
    Rng rng(900 + seed);
    const std::vector<FeatureVideo> v = {testing::RandomVideo("v", 6, 3, 3, 2, rng)};
    const auto refined = RandomRefined(v, schedule, 3, rng);
    for (bool with_mil : {false, true}) {
      auto eval = [&](const ModelParams& p) {
        return with_mil ? RetrainLoss(p, v[0], refined, 0.7) : LabelRefinementLoss(p, v[0], refined);
      };
      const LossAndGrad lg = eval(params);
      auto loss = [&](const ParamSet& p) { return eval(ModelParams::FromTensors(m, p)).loss; };
      const auto report = GradCheck(loss, params.tensors(), lg.grads, 1e-4);
      EXPECT_TRUE(report.passed) << "seed " << seed << " mil " << with_mil << " err "
                                 << report.max_rel_error;
    }
  }
}

TEST(RetrainLoss, IsMilPlusWeightedRefinement) {
  const ModelConfig m = TinyModel();
  const auto schedule = WindowSchedule::Make(6, 2, 2);
  Rng rng(5);
  const std::vector<FeatureVideo> v = {testing::RandomVideo("v", 6, 3, 3, 2, rng)};
  const auto refined = RandomRefined(v, schedule, 3, rng);
  const ModelParams params = RandomParams(m, 6);
  EXPECT_NEAR(RetrainLoss(params, v[0], refined, 0.5).loss,
              MilLoss(params, v[0]).loss + 0.5 * LabelRefinementLoss(params, v[0], refined).loss,
              1e-12);
}

TEST(SegmentCrossEntropy, MatchesFiniteDifferences) {
  const ModelConfig m = TinyModel();
  Rng rng(12);
  const auto v = testing::RandomVideo("v", 5, 3, 3, 2, rng);
  const std::vector<ClassId> labels = {1, 4, 4, 2, 3};
  const ModelParams params = RandomParams(m, 12);
  const LossAndGrad lg = SegmentCrossEntropy(params, v, labels);
  auto loss = [&](const ParamSet& p) {
    return SegmentCrossEntropy(ModelParams::FromTensors(m, p), v, labels).loss;
  };
  EXPECT_TRUE(GradCheck(loss, params.tensors(), lg.grads, 1e-4).passed);
}

TEST(TrainConfig, AuxNeedsShortWindow) {
  TrainConfig t;
  t.window_length = 6;
  t.stride = 4;
  EXPECT_NO_THROW(t.Validate(10, false));
  EXPECT_THROW(t.Validate(10, true), ScheduleError);
  t.window_length = 3;
  t.stride = 2;
  EXPECT_THROW(t.Validate(10, false), ScheduleError);
}

TEST(TrainStage1, DeterministicAndThreadIndependent) {
  const Corpus corpus = TinyCorpus();
  TrainConfig t = TinyTrain();
  const auto a = TrainStage1(corpus, TinyModel(), t, true);
  const auto b = TrainStage1(corpus, TinyModel(), t, true);
  t.threads = 3;
  const auto c = TrainStage1(corpus, TinyModel(), t, true);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.params, c.params);
  EXPECT_EQ(a.loss_curve, c.loss_curve);
  for (double x : a.loss_curve) EXPECT_TRUE(std::isfinite(x));
}

TEST(TrainStage1, ZeroAuxWeightMatchesPlainMil) {
  const Corpus corpus = TinyCorpus();
  TrainConfig t = TinyTrain();
  t.aux_weight = 0.0;
  EXPECT_EQ(TrainStage1(corpus, TinyModel(), t, true).params,
            TrainStage1(corpus, TinyModel(), t, false).params);
}

TEST(TrainStage3, MissingRecordNamesTheGap) {
  const Corpus corpus = TinyCorpus();
  const TrainConfig t = TinyTrain();
  const auto sched = t.Schedule(10);
  RefinedLabels refined = DummyRefinedLabels(corpus.train, sched, 3);
  RefinedLabels partial(sched, refined.tau(), 3);
  for (const auto& [key, value] : refined.entries()) {
    if (!(key.video_id == corpus.train[3].id && key.start == 5)) partial.Set(key.video_id, key.start, value);
  }
  try {
    TrainStage3(corpus, partial, TinyModel(), t);
    FAIL() << "expected out_of_range";
  } catch (const std::out_of_range& e) {
    EXPECT_NE(std::string(e.what()).find(corpus.train[3].id), std::string::npos) << e.what();
  }
}

TEST(TrainStage3, IndependentOfRecordInsertionOrder) {
  const Corpus corpus = TinyCorpus();
  const TrainConfig t = TinyTrain();
  const auto sched = t.Schedule(10);
  const RefinedLabels forward = OracleRefinedLabels(corpus.train, sched, 3);
  RefinedLabels backward(sched, forward.tau(), 3);
  for (auto it = forward.entries().rbegin(); it != forward.entries().rend(); ++it) {
    backward.Set(it->first.video_id, it->first.start, it->second);
  }
  EXPECT_EQ(TrainStage3(corpus, forward, TinyModel(), t).params,
            TrainStage3(corpus, backward, TinyModel(), t).params);
}

TEST(PseudoLabelBaseline, ZeroBaseModelTeachesClassOne) {
  const Corpus corpus = TinyCorpus();
  TrainConfig t = TinyTrain();
  t.stage3_epochs = 30;
  const auto result =
      PseudoLabelBaseline(corpus, ModelParams::Zeros(TinyModel()), TinyModel(), t);
  for (const auto& v : corpus.test) {
    EXPECT_EQ(PredictSegments(result.params, v), std::vector<ClassId>(10, 1)) << v.id;
  }
}

TEST(RunAblation, VariantsAndDeterminism) {
  const Corpus corpus = TinyCorpus();
  const TrainConfig t = TinyTrain();
  const PipelineReport a = RunAblation(corpus, TinyModel(), t);
  ASSERT_EQ(a.variants.size(), 5u);
  const std::vector<std::string> names = {"BASE", "BASE+PL", "BASE+LRdummy", "BASE+LR",
                                          "BASE+A+LR"};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(VariantName(a.variants[i].variant), names[i]);
  EXPECT_TRUE(a.Get(Variant::kBaseLR).refined_quality.has_value());
  EXPECT_FALSE(a.Get(Variant::kBase).refined_quality.has_value());
  const PipelineReport b = RunAblation(corpus, TinyModel(), t);
  std::ostringstream ra, rb;
  WriteReport(a, ra);
  WriteReport(b, rb);
  EXPECT_EQ(ra.str(), rb.str());
  const std::string table = FormatAblationTable(a);
  for (const auto& n : names) EXPECT_NE(table.find(n), std::string::npos) << n;
}

TEST(RunFullMethod, MatchesAblationVariant) {
  const Corpus corpus = TinyCorpus();
  const TrainConfig t = TinyTrain();
  const VariantResult full = RunFullMethod(corpus, TinyModel(), t);
  const PipelineReport report = RunAblation(corpus, TinyModel(), t);
  const VariantResult& v = report.Get(Variant::kBaseALR);
  EXPECT_EQ(full.test_metrics.confusion, v.test_metrics.confusion);
  EXPECT_EQ(full.loss_curves, v.loss_curves);
}

}  // namespace
}  // namespace avlr
