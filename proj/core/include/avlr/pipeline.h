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

// The three training stages:
//   1. weakly-supervised MIL training, optionally with the auxiliary
//      objective over spliced videos;
//   2. label refinement with the stage-1 model (see refine.h);
//   3. retraining from scratch with MIL + the window-level refinement loss.
// Plus the pseudo-label and dummy-label baselines used in the ablation.

#ifndef AVLR_PIPELINE_H_
#define AVLR_PIPELINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/metrics.h"
#include "avlr/model.h"
#include "avlr/refine.h"

namespace avlr {

struct TrainConfig {
  int stage1_epochs = 200;
  int stage3_epochs = 100;
  double learning_rate = 0.001;
  int batch_size = 64;
  double tau = 0.05;
  int window_length = 4;  // N
  int stride = 2;         // s
  double aux_weight = 1.0;
  double lr_weight = 1.0;
  std::uint64_t seed = 1;
  // Worker cap for per-video work inside a batch. Results do not depend on it.
  unsigned threads = 1;

  // Throws std::domain_error / ScheduleError. When `needs_aux`, also requires
  // N < (T+1)/2.
  void Validate(int num_segments, bool needs_aux) const;
  WindowSchedule Schedule(int num_segments) const;

  bool operator==(const TrainConfig&) const = default;
};

struct TrainResult {
  ModelParams params;
  // Mean per-video training loss for each epoch.
  std::vector<double> loss_curve;
};

// Auxiliary objective: pool raw scores within each of the T1 spliced videos,
// then across them, and match L_i u L_j. Throws PreconditionError if the
// label sets overlap or the schedule is not aux-valid.
LossAndGrad AuxLoss(const ModelParams& params, const FeatureVideo& primary,
                    const FeatureVideo& partner, const WindowSchedule& schedule);

// Window-level refinement loss alone: mean over windows of the bag loss
// against the refined vectors. Throws std::out_of_range for missing records.
LossAndGrad LabelRefinementLoss(const ModelParams& params, const FeatureVideo& video,
                                const RefinedLabels& refined);

// Stage-3 objective: MilLoss + lr_weight * LabelRefinementLoss.
LossAndGrad RetrainLoss(const ModelParams& params, const FeatureVideo& video,
                        const RefinedLabels& refined, double lr_weight);

// Mean per-segment softmax cross-entropy against fixed segment labels.
LossAndGrad SegmentCrossEntropy(const ModelParams& params, const FeatureVideo& video,
                                std::span<const ClassId> labels);

// Stage-1 init stream: Rng(model.seed); stage-3 and pseudo-label retraining
// start fresh from Rng(model.seed + 1).
ModelParams InitialParams(const ModelConfig& model, bool retrain);

TrainResult TrainStage1(const Corpus& corpus, const ModelConfig& model,
                        const TrainConfig& config, bool with_aux);

RefinedLabels RefineWithModel(const Corpus& corpus, const ModelParams& base,
                              const TrainConfig& config);

TrainResult TrainStage3(const Corpus& corpus, const RefinedLabels& refined,
                        const ModelConfig& model, const TrainConfig& config);

TrainResult PseudoLabelBaseline(const Corpus& corpus, const ModelParams& base,
                                const ModelConfig& model, const TrainConfig& config);

enum class Variant { kBase, kBasePL, kBaseLRDummy, kBaseLR, kBaseALR };

inline constexpr std::array<Variant, 5> kAllVariants = {
    Variant::kBase, Variant::kBasePL, Variant::kBaseLRDummy, Variant::kBaseLR, Variant::kBaseALR};

std::string_view VariantName(Variant v);

struct LossCurve {
  std::string stage;
  std::vector<double> values;
  bool operator==(const LossCurve&) const = default;
};

struct VariantResult {
  Variant variant = Variant::kBase;
  MetricsReport test_metrics;
  // Window-label quality against ground truth on the training split, for
  // variants that retrain on window labels.
  std::optional<WindowLabelQuality> refined_quality;
  std::vector<LossCurve> loss_curves;
};

struct PipelineReport {
  CorpusSpec corpus;
  ModelConfig model;
  TrainConfig train;
  std::vector<VariantResult> variants;

  const VariantResult& Get(Variant v) const;
};

// Runs the five ablation variants. BASE, BASE+PL, BASE+LRdummy and BASE+LR
// share one stage-1 model; BASE+A+LR trains its own stage-1 model with the
// auxiliary objective.
PipelineReport RunAblation(const Corpus& corpus, const ModelConfig& model,
                           const TrainConfig& config);

// The BASE+A+LR variant on its own (what the staged CLI commands produce).
VariantResult RunFullMethod(const Corpus& corpus, const ModelConfig& model,
                            const TrainConfig& config);

// Line-delimited records ("avlr-report 1" ... "end"); byte-stable for equal
// inputs.
void WriteReport(const PipelineReport& report, std::ostream& out);
std::string FormatAblationTable(const PipelineReport& report);

}  // namespace avlr

#endif  // AVLR_PIPELINE_H_
