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

// Independent reference implementations used only by tests. Nothing here
// calls into the code paths it is used to check.

#ifndef AVLR_TESTS_TESTING_ORACLES_H_
#define AVLR_TESTS_TESTING_ORACLES_H_

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/model.h"
#include "avlr/rng.h"

namespace avlr::testing {

// Events present in y[first..last] (1-based), read segment by segment.
inline std::set<int> ScanWindow(std::span<const int> y, int num_events, int first, int last) {
  std::set<int> out;
  for (int t = first; t <= last; ++t) {
    if (y[t - 1] <= num_events) out.insert(y[t - 1]);
  }
  return out;
}

struct BruteMetrics {
  double accuracy = 0.0;
  double non_ave_recall = 0.0, non_ave_precision = 0.0, non_ave_f1 = 0.0;
  double ave_recall = 0.0, ave_precision = 0.0, ave_f1 = 0.0;
  double weighted_f1 = 0.0;
};

inline double F1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }
inline double Ratio(std::size_t a, std::size_t b) { return b ? double(a) / double(b) : 0.0; }

// Per-class counting by direct scans over the flattened segment stream.
inline BruteMetrics BruteForceMetrics(const std::vector<std::vector<int>>& pred,
                                      const std::vector<std::vector<int>>& truth,
                                      int num_events) {
  std::vector<int> p, y;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    p.insert(p.end(), pred[v].begin(), pred[v].end());
    y.insert(y.end(), truth[v].begin(), truth[v].end());
  }
  const int bg = num_events + 1;
  BruteMetrics m;
  std::size_t correct = 0, bg_hit = 0, bg_true = 0, bg_pred = 0, ev_hit = 0, ev_true = 0,
              ev_pred = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    correct += p[i] == y[i];
    bg_true += y[i] == bg;
    bg_pred += p[i] == bg;
    bg_hit += (y[i] == bg && p[i] == bg);
    ev_true += y[i] != bg;
    ev_pred += p[i] != bg;
    ev_hit += (y[i] != bg && p[i] == y[i]);
  }
  m.accuracy = Ratio(correct, y.size());
  m.non_ave_recall = Ratio(bg_hit, bg_true);
  m.non_ave_precision = Ratio(bg_hit, bg_pred);
  m.non_ave_f1 = F1(m.non_ave_precision, m.non_ave_recall);
  m.ave_recall = Ratio(ev_hit, ev_true);
  m.ave_precision = Ratio(ev_hit, ev_pred);
  m.ave_f1 = F1(m.ave_precision, m.ave_recall);
  double weighted = 0.0;
  for (int c = 1; c <= bg; ++c) {
    std::size_t hit = 0, t = 0, q = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      t += y[i] == c;
      q += p[i] == c;
      hit += (y[i] == c && p[i] == c);
    }
    weighted += double(t) * F1(Ratio(hit, q), Ratio(hit, t));
  }
  m.weighted_f1 = y.empty() ? 0.0 : weighted / double(y.size());
  return m;
}

// Small random video; segment labels are arbitrary (not necessarily one
// contiguous event) unless `contiguous` is set.
inline FeatureVideo RandomVideo(const std::string& id, int num_segments, int num_events,
                                int audio_dim, int visual_dim, Rng& rng,
                                bool contiguous = true) {
  FeatureVideo v;
  v.id = id;
  v.audio = Matrix(num_segments, audio_dim);
  v.visual = Matrix(num_segments, visual_dim);
  for (double& x : v.audio.data()) x = rng.Normal();
  for (double& x : v.visual.data()) x = rng.Normal();
  v.segment_labels.assign(num_segments, num_events + 1);
  if (contiguous) {
    if (rng.Uniform() < 0.8) {
      const int c = 1 + static_cast<int>(rng.UniformIndex(num_events));
      const int a = 1 + static_cast<int>(rng.UniformIndex(num_segments));
      const int b = a + static_cast<int>(rng.UniformIndex(num_segments - a + 1));
      for (int t = a; t <= b; ++t) v.segment_labels[t - 1] = c;
    }
  } else {
    for (int& y : v.segment_labels) y = 1 + static_cast<int>(rng.UniformIndex(num_events + 1));
  }
  v.video_label = VideoLabelFromSegments(v.segment_labels, num_events);
  return v;
}

// Segment labels for two videos whose event sets are disjoint by
// construction: each class goes to the first video, the second, or neither.
inline std::pair<std::vector<int>, std::vector<int>> RandomDisjointLabels(int num_segments,
                                                                          int num_events,
                                                                          Rng& rng) {
  std::vector<int> own[2];
  for (int c = 1; c <= num_events; ++c) {
    const std::size_t side = rng.UniformIndex(3);
    if (side < 2) own[side].push_back(c);
  }
  std::pair<std::vector<int>, std::vector<int>> out;
  for (int k = 0; k < 2; ++k) {
    std::vector<int>& y = k == 0 ? out.first : out.second;
    for (int t = 0; t < num_segments; ++t) {
      const std::size_t pick = rng.UniformIndex(own[k].size() + 1);
      y.push_back(pick == own[k].size() ? num_events + 1 : own[k][pick]);
    }
  }
  return out;
}

// Random features carrying the given segment labels.
inline FeatureVideo VideoWithLabels(const std::string& id, std::vector<int> labels,
                                    int num_events, int dim, Rng& rng) {
  FeatureVideo v;
  v.id = id;
  const int t = static_cast<int>(labels.size());
  v.audio = Matrix(t, dim);
  v.visual = Matrix(t, dim);
  for (double& x : v.audio.data()) x = rng.Normal();
  for (double& x : v.visual.data()) x = rng.Normal();
  v.segment_labels = std::move(labels);
  v.video_label = VideoLabelFromSegments(v.segment_labels, num_events);
  return v;
}

}  // namespace avlr::testing

#endif  // AVLR_TESTS_TESTING_ORACLES_H_
