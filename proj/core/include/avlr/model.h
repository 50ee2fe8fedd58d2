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

// Base MIL model: a per-segment encoder over concatenated audio+visual
// features (with +-r segments of zero-padded temporal context), a ReLU hidden
// layer, and a linear head producing raw class scores x_t. Video-level
// predictions are SoftMax(MaxPool(x_t)) over a window of segments.
//
// Gradients are computed by hand. The max-pool backward routes each class's
// gradient to the single (lowest-index) argmax row.

#ifndef AVLR_MODEL_H_
#define AVLR_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/labels.h"
#include "avlr/numkit.h"
#include "avlr/rng.h"

namespace avlr {

struct ModelConfig {
  int audio_dim = 16;
  int visual_dim = 16;
  int hidden = 32;
  int num_events = 6;
  int context_radius = 1;
  std::uint64_t seed = 1;

  int input_dim() const { return (audio_dim + visual_dim) * (2 * context_radius + 1); }
  int num_classes() const { return num_events + 1; }
  void Validate() const;

  bool operator==(const ModelConfig&) const = default;
};

class ModelParams {
 public:
  enum Tensor : std::size_t { kW1 = 0, kB1 = 1, kW2 = 2, kB2 = 3, kNumTensors = 4 };

  static ModelParams Zeros(const ModelConfig& config);
  // Scaled-normal weights, zero biases.
  static ModelParams Random(const ModelConfig& config, Rng& rng);
  // Wraps existing tensors; throws std::domain_error on shape mismatch.
  static ModelParams FromTensors(const ModelConfig& config, ParamSet tensors);

  const ModelConfig& config() const { return config_; }
  ParamSet& tensors() { return tensors_; }
  const ParamSet& tensors() const { return tensors_; }

  // input_dim x hidden, 1 x hidden, hidden x (C+1), 1 x (C+1).
  const Matrix& w1() const { return tensors_[kW1]; }
  const Matrix& b1() const { return tensors_[kB1]; }
  const Matrix& w2() const { return tensors_[kW2]; }
  const Matrix& b2() const { return tensors_[kB2]; }

  bool operator==(const ModelParams&) const = default;

 private:
  ModelConfig config_;
  ParamSet tensors_;
};

// Segment window [first, last], 1-based and inclusive.
struct Window {
  int first = 1;
  int last = 1;
  int length() const { return last - first + 1; }
  bool operator==(const Window&) const = default;
};

struct ForwardCache {
  Matrix inputs;  // T x input_dim
  Matrix pre;     // T x hidden, before ReLU
  Matrix hidden;  // T x hidden
  Matrix scores;  // T x (C+1)
};

ForwardCache ForwardPass(const ModelParams& params, const Matrix& audio, const Matrix& visual);
Matrix ForwardScores(const ModelParams& params, const FeatureVideo& video);

// Accumulates dL/dparams into `grads` given dL/dscores.
void BackwardPass(const ModelParams& params, const ForwardCache& cache,
                  const Matrix& grad_scores, ParamSet& grads);

// SoftMax of the column max over rows window.first..window.last.
std::vector<double> VideoPrediction(const Matrix& scores, Window window);

// g(VideoPrediction(scores, window), target) with g = BceProbs. When
// `grad_scores` is non-null, adds weight * dg/dscores into it.
double BagLoss(const Matrix& scores, Window window, std::span<const double> target,
               Matrix* grad_scores = nullptr, double weight = 1.0);

struct LossAndGrad {
  double loss = 0.0;
  ParamSet grads;
};

// Weak-supervision loss over the whole video against its video-level label.
LossAndGrad MilLoss(const ModelParams& params, const FeatureVideo& video);

// Per-row argmax of raw scores (ties to the lowest class id), as class ids.
std::vector<ClassId> PredictFromScores(const Matrix& scores);
std::vector<ClassId> PredictSegments(const ModelParams& params, const FeatureVideo& video);

// Versioned text checkpoint; round trip is bit-exact.
void SaveCheckpoint(const ModelParams& params, std::ostream& out);
void SaveCheckpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams LoadCheckpoint(std::istream& in);
ModelParams LoadCheckpoint(const std::filesystem::path& path);

}  // namespace avlr

#endif  // AVLR_MODEL_H_
