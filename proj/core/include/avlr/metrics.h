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

// Segment-level evaluation. Accuracy alone rewards repeating the video-level
// class across every segment, so the report also carries background
// ("non-AVE") detection and event ("AVE") classification scores.
//
// Definitions used throughout:
//   * non-AVE: background (class C+1) as a binary detection problem.
//   * AVE recall = correctly classified event segments / true event segments;
//     AVE precision = correctly classified event segments / segments
//     predicted as any event. A hit needs the exact event class.
//   * weighted F1 = per-class F1 averaged with true-support weights over all
//     C+1 classes, background included.
//   * F1 = 2PR/(P+R), and 0 when P+R = 0.

#ifndef AVLR_METRICS_H_
#define AVLR_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/labels.h"
#include "avlr/model.h"

namespace avlr {

struct DetectionScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  // False when the denominator was zero (reported as '-' in tables).
  bool recall_defined = false;
  bool precision_defined = false;

  bool operator==(const DetectionScore&) const = default;
};

struct MetricsReport {
  int num_events = 0;
  std::size_t segments = 0;
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  DetectionScore non_ave;
  DetectionScore ave;
  // Indexed by class id - 1, length C+1.
  std::vector<DetectionScore> per_class;
  std::vector<std::size_t> support;
  // confusion[truth-1][pred-1].
  std::vector<std::vector<std::size_t>> confusion;

  bool operator==(const MetricsReport&) const = default;
};

using SegmentLabels = std::vector<ClassId>;

// Throws std::domain_error on shape mismatch or class ids outside [1, C+1].
MetricsReport ComputeMetrics(std::span<const SegmentLabels> predictions,
                             std::span<const SegmentLabels> truth, int num_events);

MetricsReport EvaluateModel(const ModelParams& params, std::span<const FeatureVideo> videos);

// Repeats the true video-level event across all segments (background for
// event-free videos).
std::vector<SegmentLabels> GtRepeatPredictions(std::span<const FeatureVideo> videos);
// Repeats the argmax of the model's video-level prediction across all
// segments.
std::vector<SegmentLabels> AveRepeatPredictions(const ModelParams& params,
                                                std::span<const FeatureVideo> videos);

struct NaiveBaselines {
  MetricsReport ave_repeat;
  MetricsReport gt_repeat;
};

NaiveBaselines RunNaiveBaselines(std::span<const FeatureVideo> videos,
                                 const ModelParams& base_params);

// Appends " accuracy=<x> weighted_f1=<x> non_ave_f1=<x> ..." (shortest
// round-trip decimals, fractions not percent) for line-delimited reports.
void WriteMetricsFields(const MetricsReport& m, std::ostream& out);

// "2.1 (1.1/25.8)"-style cell, in percent; '-' for undefined values.
std::string FormatDetection(const DetectionScore& score);

struct TableRow {
  std::string method;
  // Absent for rows that were not run (rejected sweep cells); their metric
  // cells print as '-'.
  std::optional<MetricsReport> metrics;
  // Value for the optional trailing column.
  std::string extra;
};

// Aligned method x metric table, in percent:
//   Method | Accuracy | Wt. F1 | Non-AVE F1 (R/P) | AVE F1 (R/P) [| extra]
// The extra column appears when `extra_header` is non-empty.
std::string FormatMetricsTable(std::span<const TableRow> rows,
                               std::string_view extra_header = {});

}  // namespace avlr

#endif  // AVLR_METRICS_H_
