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

// Parameter sweeps over the detection threshold and the window plan.

#ifndef AVLR_SWEEP_H_
#define AVLR_SWEEP_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avlr/metrics.h"
#include "avlr/pipeline.h"

namespace avlr {

struct SweepCell {
  std::string label;  // "tau=0.05" or "N=4,s=2"
  double tau = 0.0;
  int window_length = 0;
  int stride = 0;
  int num_windows = 0;  // T1; 0 for rejected cells
  bool rejected = false;
  std::string reason;
  std::optional<MetricsReport> metrics;
  std::optional<WindowLabelQuality> refined_quality;
};

struct SweepResult {
  std::string parameter;  // "tau" or "window"
  std::vector<SweepCell> cells;
};

// BASE+A+LR per threshold, reusing one stage-1 model. Throws
// std::domain_error for thresholds outside (0, 1) or duplicate values.
SweepResult SweepTau(const Corpus& corpus, const ModelConfig& model, const TrainConfig& config,
                     std::span<const double> taus);

// BASE+A+LR per (N, s). Cells whose schedule is invalid (s does not divide
// T-N, or N >= (T+1)/2) are kept as rejected cells instead of aborting.
SweepResult SweepWindow(const Corpus& corpus, const ModelConfig& model,
                        const TrainConfig& config, std::span<const std::pair<int, int>> choices);

void WriteSweep(const SweepResult& sweep, std::ostream& out);
std::string FormatSweepTable(const SweepResult& sweep);

}  // namespace avlr

#endif  // AVLR_SWEEP_H_
