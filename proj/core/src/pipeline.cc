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

#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "avlr/errors.h"
#include "avlr/parallel.h"

namespace avlr {
namespace {

using VideoLoss =
    std::function<LossAndGrad(const ModelParams&, const FeatureVideo&, std::size_t epoch)>;

TrainResult TrainLoop(ModelParams params, std::span<const FeatureVideo> videos, int epochs,
                      const TrainConfig& cfg, std::string_view stage, const VideoLoss& loss) {
  if (videos.empty()) throw std::domain_error(std::string(stage) + ": no training videos");
  OptimizerState state(params.tensors(), AdamOptions{.learning_rate = cfg.learning_rate});
  const Rng root(cfg.seed);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  TrainResult result{std::move(params), {}};
  std::vector<std::size_t> order(videos.size());
  std::vector<LossAndGrad> slots(batch);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle = root.Derive(std::string(stage) + "-shuffle", static_cast<std::uint64_t>(epoch));
    shuffle.Shuffle(std::span<std::size_t>(order));

    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch, ++batch_index) {
      const std::size_t n = std::min(batch, order.size() - begin);
      ParallelFor(n, cfg.threads, [&](std::size_t i) {
        slots[i] = loss(result.params, videos[order[begin + i]], static_cast<std::size_t>(epoch));
      });
      ParamSet grads = ZerosLike(result.params.tensors());
      double batch_loss = 0.0;
      const double scale = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        batch_loss += slots[i].loss;
        AddScaled(grads, slots[i].grads, scale);
      }
      if (!std::isfinite(batch_loss) || !AllFinite(grads)) {
        throw NumericError(std::string(stage) + ": non-finite loss or gradient at epoch " +
                           std::to_string(epoch + 1) + ", batch " +
                           std::to_string(batch_index + 1));
      }
      AdamStep(result.params.tensors(), grads, state);
      epoch_loss += batch_loss;
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(videos.size()));
  }
  if (!AllFinite(result.params.tensors())) {
    throw NumericError(std::string(stage) + ": parameters became non-finite");
  }
  return result;
}

void CheckCorpusMatchesModel(const Corpus& corpus, const ModelConfig& model) {
  const CorpusSpec& s = corpus.spec;
  if (s.audio_dim != model.audio_dim || s.visual_dim != model.visual_dim ||
      s.num_events != model.num_events) {
    throw std::domain_error("model config (d_a, d_v, C) does not match the corpus");
  }
}

}  // namespace

void TrainConfig::Validate(int num_segments, bool needs_aux) const {
  if (stage1_epochs < 1 || stage3_epochs < 1) throw std::domain_error("epochs must be >= 1");
  if (batch_size < 1) throw std::domain_error("batch size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::domain_error("learning rate must be > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("tau must lie in (0, 1)");
  if (!(aux_weight >= 0.0) || !(lr_weight >= 0.0)) {
    throw std::domain_error("loss weights must be >= 0");
  }
  const WindowSchedule schedule = Schedule(num_segments);
  if (needs_aux && !schedule.aux_valid()) {
    throw ScheduleError("auxiliary objective needs N < (T+1)/2, got N=" +
                        std::to_string(window_length) + ", T=" + std::to_string(num_segments));
  }
}

WindowSchedule TrainConfig::Schedule(int num_segments) const {
  return WindowSchedule::Make(num_segments, window_length, stride);
}

LossAndGrad AuxLoss(const ModelParams& params, const FeatureVideo& primary,
                    const FeatureVideo& partner, const WindowSchedule& schedule) {
  const LabelSet li = primary.events();
  const LabelSet lj = partner.events();
  if (!li.DisjointFrom(lj)) {
    throw PreconditionError("AuxLoss: videos '" + primary.id + "' and '" + partner.id +
                            "' share classes " + li.Intersect(lj).ToString());
  }
  if (!schedule.aux_valid()) {
    throw PreconditionError("AuxLoss: schedule with N=" + std::to_string(schedule.window_length()) +
                            ", T=" + std::to_string(schedule.num_segments()) +
                            " violates N < (T+1)/2");
  }
  const std::size_t windows = schedule.starts().size();
  std::vector<ForwardCache> caches;
  std::vector<ColumnMax> within;
  caches.reserve(windows);
  within.reserve(windows);
  for (std::size_t k = 0; k < windows; ++k) {
    const ComposedVideo composed = ComposeSynthetic(primary, partner, schedule.window(k));
    caches.push_back(ForwardPass(params, composed.video.audio, composed.video.visual));
    within.push_back(MaxPoolCols(caches.back().scores));
  }
  // Across windows; ties to the earliest window.
  const std::size_t classes = within.front().values.size();
  std::vector<double> pooled = within.front().values;
  std::vector<std::size_t> best(classes, 0);
  for (std::size_t k = 1; k < windows; ++k) {
    for (std::size_t c = 0; c < classes; ++c) {
      if (within[k].values[c] > pooled[c]) {
        pooled[c] = within[k].values[c];
        best[c] = k;
      }
    }
  }
  const std::vector<double> probs = Softmax(pooled);
  const std::vector<double> target =
      LabelVector(primary.video_label.num_events(), li.Union(lj)).AsTarget();

  LossAndGrad out;
  out.loss = BceProbs(probs, target);
  out.grads = ZerosLike(params.tensors());
  const std::vector<double> d_logits = SoftmaxBackward(probs, BceProbsGrad(probs, target));
  std::vector<Matrix> d_scores;
  d_scores.reserve(windows);
  for (const auto& cache : caches) d_scores.emplace_back(cache.scores.rows(), cache.scores.cols());
  std::vector<bool> touched(windows, false);
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t k = best[c];
    d_scores[k](within[k].argmax[c], c) += d_logits[c];
    touched[k] = true;
  }
  for (std::size_t k = 0; k < windows; ++k) {
    if (touched[k]) BackwardPass(params, caches[k], d_scores[k], out.grads);
  }
  return out;
}

namespace {

LossAndGrad WindowedLoss(const ModelParams& params, const FeatureVideo& video,
                         const RefinedLabels* refined, double mil_weight, double lr_weight) {
  const ForwardCache cache = ForwardPass(params, video.audio, video.visual);
  Matrix d_scores(cache.scores.rows(), cache.scores.cols());
  LossAndGrad out;
  if (mil_weight != 0.0) {
    out.loss += mil_weight * BagLoss(cache.scores, Window{1, video.num_segments()},
                                     video.video_label.AsTarget(), &d_scores, mil_weight);
  }
  if (refined != nullptr) {
    const WindowSchedule& schedule = refined->schedule();
    if (schedule.num_segments() != video.num_segments()) {
      throw std::domain_error("refined labels were built for a different T");
    }
    const double w = lr_weight / static_cast<double>(schedule.num_windows());
    for (std::size_t k = 0; k < schedule.starts().size(); ++k) {
      const LabelVector& target = refined->At(video.id, schedule.starts()[k]);
      out.loss += w * BagLoss(cache.scores, schedule.window(k), target.AsTarget(), &d_scores, w);
    }
  }
  out.grads = ZerosLike(params.tensors());
  BackwardPass(params, cache, d_scores, out.grads);
  return out;
}

}  // namespace

LossAndGrad LabelRefinementLoss(const ModelParams& params, const FeatureVideo& video,
                                const RefinedLabels& refined) {
  return WindowedLoss(params, video, &refined, 0.0, 1.0);
}

LossAndGrad RetrainLoss(const ModelParams& params, const FeatureVideo& video,
                        const RefinedLabels& refined, double lr_weight) {
  return WindowedLoss(params, video, &refined, 1.0, lr_weight);
}

LossAndGrad SegmentCrossEntropy(const ModelParams& params, const FeatureVideo& video,
                                std::span<const ClassId> labels) {
  if (labels.size() != static_cast<std::size_t>(video.num_segments())) {
    throw std::domain_error("SegmentCrossEntropy: label count differs from T");
  }
  const ForwardCache cache = ForwardPass(params, video.audio, video.visual);
  Matrix d_scores(cache.scores.rows(), cache.scores.cols());
  const double inv_t = 1.0 / static_cast<double>(labels.size());
  LossAndGrad out;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const auto y = static_cast<std::size_t>(labels[t] - 1);
    const std::vector<double> probs = Softmax(cache.scores.row(t));
    out.loss -= inv_t * std::log(std::max(probs[y], kProbClamp));
    for (std::size_t c = 0; c < probs.size(); ++c) {
      d_scores(t, c) = inv_t * (probs[c] - (c == y ? 1.0 : 0.0));
    }
  }
  out.grads = ZerosLike(params.tensors());
  BackwardPass(params, cache, d_scores, out.grads);
  return out;
}

ModelParams InitialParams(const ModelConfig& model, bool retrain) {
  Rng rng = Rng(retrain ? model.seed + 1 : model.seed).Derive("init");
  return ModelParams::Random(model, rng);
}

TrainResult TrainStage1(const Corpus& corpus, const ModelConfig& model,
                        const TrainConfig& config, bool with_aux) {
  CheckCorpusMatchesModel(corpus, model);
  config.Validate(corpus.spec.num_segments, with_aux);
  const WindowSchedule schedule = config.Schedule(corpus.spec.num_segments);
  const std::span<const FeatureVideo> train = corpus.train;
  const Rng root(config.seed);
  auto loss = [&](const ModelParams& params, const FeatureVideo& video, std::size_t epoch) {
    LossAndGrad total = MilLoss(params, video);
    if (with_aux) {
      Rng rng = root.Derive("aux-partner", epoch).Derive("video", video.id);
      const FeatureVideo& partner = DisjointPartner(train, video, rng);
      const LossAndGrad aux = AuxLoss(params, video, partner, schedule);
      total.loss += config.aux_weight * aux.loss;
      AddScaled(total.grads, aux.grads, config.aux_weight);
    }
    return total;
  };
  // Same stream name with or without aux, so a zero aux weight reproduces plain MIL.
  return TrainLoop(InitialParams(model, false), train, config.stage1_epochs, config, "stage1",
                   loss);
}

RefinedLabels RefineWithModel(const Corpus& corpus, const ModelParams& base,
                              const TrainConfig& config) {
  config.Validate(corpus.spec.num_segments, false);
  return RefineCorpus(ModelPredictor(base), corpus.train, config.Schedule(corpus.spec.num_segments),
                      config.tau, Rng(config.seed).Derive("refine"), config.threads);
}

TrainResult TrainStage3(const Corpus& corpus, const RefinedLabels& refined,
                        const ModelConfig& model, const TrainConfig& config) {
  CheckCorpusMatchesModel(corpus, model);
  refined.CheckCovers(corpus.train);
  auto loss = [&](const ModelParams& params, const FeatureVideo& video, std::size_t) {
    return RetrainLoss(params, video, refined, config.lr_weight);
  };
  return TrainLoop(InitialParams(model, true), corpus.train, config.stage3_epochs, config, "stage3",
                   loss);
}

TrainResult PseudoLabelBaseline(const Corpus& corpus, const ModelParams& base,
                                const ModelConfig& model, const TrainConfig& config) {
  CheckCorpusMatchesModel(corpus, model);
  std::map<std::string, std::vector<ClassId>> pseudo;
  for (const FeatureVideo& v : corpus.train) pseudo.emplace(v.id, PredictSegments(base, v));
  auto loss = [&](const ModelParams& params, const FeatureVideo& video, std::size_t) {
    return SegmentCrossEntropy(params, video, pseudo.at(video.id));
  };
  return TrainLoop(InitialParams(model, true), corpus.train, config.stage3_epochs, config,
                   "pseudo-label", loss);
}

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kBase: return "BASE";
    case Variant::kBasePL: return "BASE+PL";
    case Variant::kBaseLRDummy: return "BASE+LRdummy";
    case Variant::kBaseLR: return "BASE+LR";
    case Variant::kBaseALR: return "BASE+A+LR";
  }
  return "?";
}

const VariantResult& PipelineReport::Get(Variant v) const {
  for (const VariantResult& r : variants) {
    if (r.variant == v) return r;
  }
  throw std::out_of_range("report has no variant " + std::string(VariantName(v)));
}

namespace {

VariantResult Retrained(Variant variant, const Corpus& corpus, const RefinedLabels& refined,
                        const RefinedLabels& oracle, const ModelConfig& model,
                        const TrainConfig& config, std::vector<LossCurve> curves) {
  TrainResult stage3 = TrainStage3(corpus, refined, model, config);
  curves.push_back({"stage3", std::move(stage3.loss_curve)});
  VariantResult r;
  r.variant = variant;
  r.test_metrics = EvaluateModel(stage3.params, corpus.test);
  r.refined_quality = CompareRefined(refined, oracle);
  r.loss_curves = std::move(curves);
  return r;
}

}  // namespace

VariantResult RunFullMethod(const Corpus& corpus, const ModelConfig& model,
                            const TrainConfig& config) {
  const WindowSchedule schedule = config.Schedule(corpus.spec.num_segments);
  const RefinedLabels oracle = OracleRefinedLabels(corpus.train, schedule, corpus.spec.num_events);
  TrainResult aux = TrainStage1(corpus, model, config, true);
  const RefinedLabels refined = RefineWithModel(corpus, aux.params, config);
  return Retrained(Variant::kBaseALR, corpus, refined, oracle, model, config,
                   {{"stage1-aux", std::move(aux.loss_curve)}});
}

PipelineReport RunAblation(const Corpus& corpus, const ModelConfig& model,
                           const TrainConfig& config) {
  config.Validate(corpus.spec.num_segments, true);
  PipelineReport report{corpus.spec, model, config, {}};
  const WindowSchedule schedule = config.Schedule(corpus.spec.num_segments);
  const RefinedLabels oracle = OracleRefinedLabels(corpus.train, schedule, corpus.spec.num_events);

  TrainResult base = TrainStage1(corpus, model, config, false);
  const LossCurve base_curve{"stage1", base.loss_curve};
  {
    VariantResult r;
    r.variant = Variant::kBase;
    r.test_metrics = EvaluateModel(base.params, corpus.test);
    r.loss_curves = {base_curve};
    report.variants.push_back(std::move(r));
  }
  {
    TrainResult pl = PseudoLabelBaseline(corpus, base.params, model, config);
    VariantResult r;
    r.variant = Variant::kBasePL;
    r.test_metrics = EvaluateModel(pl.params, corpus.test);
    r.loss_curves = {base_curve, {"pseudo-label", std::move(pl.loss_curve)}};
    report.variants.push_back(std::move(r));
  }
  report.variants.push_back(Retrained(Variant::kBaseLRDummy, corpus,
                                      DummyRefinedLabels(corpus.train, schedule,
                                                         corpus.spec.num_events),
                                      oracle, model, config, {}));
  report.variants.push_back(Retrained(Variant::kBaseLR, corpus,
                                      RefineWithModel(corpus, base.params, config), oracle, model,
                                      config, {base_curve}));
  report.variants.push_back(RunFullMethod(corpus, model, config));
  return report;
}

}  // namespace avlr
