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

#include "avlr/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace avlr {
namespace {

DetectionScore Score(std::size_t hits, std::size_t truth_total, std::size_t predicted_total) {
  DetectionScore s;
  s.recall_defined = truth_total > 0;
  s.precision_defined = predicted_total > 0;
  s.recall = s.recall_defined ? static_cast<double>(hits) / static_cast<double>(truth_total) : 0.0;
  s.precision =
      s.precision_defined ? static_cast<double>(hits) / static_cast<double>(predicted_total) : 0.0;
  const double sum = s.recall + s.precision;
  s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

std::string Percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * x);
  return buf;
}

}  // namespace

MetricsReport ComputeMetrics(std::span<const SegmentLabels> predictions,
                             std::span<const SegmentLabels> truth, int num_events) {
  if (num_events < 1) throw std::domain_error("ComputeMetrics: need at least one event class");
  if (predictions.size() != truth.size()) {
    throw std::domain_error("ComputeMetrics: prediction/truth video counts differ");
  }
  const auto k_count = static_cast<std::size_t>(num_events) + 1;
  MetricsReport r;
  r.num_events = num_events;
  r.confusion.assign(k_count, std::vector<std::size_t>(k_count, 0));
  for (std::size_t v = 0; v < truth.size(); ++v) {
    if (predictions[v].size() != truth[v].size()) {
      throw std::domain_error("ComputeMetrics: segment counts differ for video " + std::to_string(v));
    }
    for (std::size_t t = 0; t < truth[v].size(); ++t) {
      const ClassId y = truth[v][t];
      const ClassId p = predictions[v][t];
      if (y < 1 || y > num_events + 1 || p < 1 || p > num_events + 1) {
        throw std::domain_error("ComputeMetrics: unknown class id at video " + std::to_string(v) +
                                ", segment " + std::to_string(t + 1));
      }
      ++r.confusion[static_cast<std::size_t>(y - 1)][static_cast<std::size_t>(p - 1)];
      ++r.segments;
    }
  }

  std::vector<std::size_t> predicted(k_count, 0);
  r.support.assign(k_count, 0);
  std::size_t trace = 0;
  for (std::size_t y = 0; y < k_count; ++y) {
    for (std::size_t p = 0; p < k_count; ++p) {
      r.support[y] += r.confusion[y][p];
      predicted[p] += r.confusion[y][p];
    }
    trace += r.confusion[y][y];
  }
  if (r.segments > 0) r.accuracy = static_cast<double>(trace) / static_cast<double>(r.segments);

  r.per_class.resize(k_count);
  double weighted = 0.0;
  for (std::size_t c = 0; c < k_count; ++c) {
    r.per_class[c] = Score(r.confusion[c][c], r.support[c], predicted[c]);
    weighted += static_cast<double>(r.support[c]) * r.per_class[c].f1;
  }
  if (r.segments > 0) r.weighted_f1 = weighted / static_cast<double>(r.segments);

  const std::size_t bg = k_count - 1;
  r.non_ave = r.per_class[bg];

  std::size_t event_hits = 0;
  std::size_t event_truth = 0;
  std::size_t event_pred = 0;
  for (std::size_t c = 0; c < bg; ++c) {
    event_hits += r.confusion[c][c];
    event_truth += r.support[c];
    event_pred += predicted[c];
  }
  r.ave = Score(event_hits, event_truth, event_pred);
  return r;
}

MetricsReport EvaluateModel(const ModelParams& params, std::span<const FeatureVideo> videos) {
  std::vector<SegmentLabels> pred;
  std::vector<SegmentLabels> truth;
  pred.reserve(videos.size());
  truth.reserve(videos.size());
  for (const FeatureVideo& v : videos) {
    pred.push_back(PredictSegments(params, v));
    truth.push_back(v.segment_labels);
  }
  return ComputeMetrics(pred, truth, params.config().num_events);
}

std::vector<SegmentLabels> GtRepeatPredictions(std::span<const FeatureVideo> videos) {
  std::vector<SegmentLabels> out;
  out.reserve(videos.size());
  for (const FeatureVideo& v : videos) {
    const LabelSet events = v.events();
    const ClassId c =
        events.empty() ? BackgroundId(v.video_label.num_events()) : *events.begin();
    out.emplace_back(v.segment_labels.size(), c);
  }
  return out;
}

std::vector<SegmentLabels> AveRepeatPredictions(const ModelParams& params,
                                                std::span<const FeatureVideo> videos) {
  std::vector<SegmentLabels> out;
  out.reserve(videos.size());
  for (const FeatureVideo& v : videos) {
    const auto probs = VideoPrediction(ForwardScores(params, v), Window{1, v.num_segments()});
    out.emplace_back(v.segment_labels.size(), static_cast<ClassId>(ArgMax(probs)) + 1);
  }
  return out;
}

NaiveBaselines RunNaiveBaselines(std::span<const FeatureVideo> videos,
                                 const ModelParams& base_params) {
  std::vector<SegmentLabels> truth;
  for (const FeatureVideo& v : videos) truth.push_back(v.segment_labels);
  const int c = base_params.config().num_events;
  return {ComputeMetrics(AveRepeatPredictions(base_params, videos), truth, c),
          ComputeMetrics(GtRepeatPredictions(videos), truth, c)};
}

std::string FormatDetection(const DetectionScore& s) {
  const bool f1_defined = s.recall_defined && s.precision_defined;
  std::string out = f1_defined ? Percent(s.f1) : "-";
  out += " (";
  out += s.recall_defined ? Percent(s.recall) : "-";
  out += "/";
  out += s.precision_defined ? Percent(s.precision) : "-";
  out += ")";
  return out;
}

std::string FormatMetricsTable(std::span<const TableRow> rows, std::string_view extra_header) {
  const bool extra = !extra_header.empty();
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"Method", "Accuracy", "Wt. F1", "Non-AVE F1 (R/P)", "AVE F1 (R/P)"});
  if (extra) cells.back().emplace_back(extra_header);
  for (const TableRow& row : rows) {
    if (row.metrics) {
      cells.push_back({row.method, Percent(row.metrics->accuracy),
                       Percent(row.metrics->weighted_f1), FormatDetection(row.metrics->non_ave),
                       FormatDetection(row.metrics->ave)});
    } else {
      cells.push_back({row.method, "-", "-", "-", "-"});
    }
    if (extra) cells.back().push_back(row.extra);
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      const std::string& cell = cells[r][i];
      if (i > 0) out << " | ";
      out << cell;
      if (i + 1 < cells[r].size()) out << std::string(width[i] - cell.size(), ' ');
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 3;
      out << std::string(total - 3, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace avlr
