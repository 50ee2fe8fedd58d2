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

// Temporal label refinement. For a training video V_i and a label-disjoint
// partner V_j, each window [t1, t1+N-1] of V_i is spliced into V_j, the base
// model predicts video-level probabilities for the spliced video, and those
// are filtered by V_i's video label and thresholded to give the events
// localized to that window.

#ifndef AVLR_REFINE_H_
#define AVLR_REFINE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/labels.h"
#include "avlr/model.h"
#include "avlr/rng.h"

namespace avlr {

// Sliding windows of length N with stride s over T segments. Window starts
// are 1-based: 1, 1+s, ..., T-N+1.
class WindowSchedule {
 public:
  // Throws ScheduleError unless 1 <= N <= T, s >= 1, s divides T-N and (when
  // there is more than one window) s <= N.
  static WindowSchedule Make(int num_segments, int window_length, int stride);

  int num_segments() const { return num_segments_; }
  int window_length() const { return window_length_; }
  int stride() const { return stride_; }
  const std::vector<int>& starts() const { return starts_; }
  // T1 = (T - N) / s + 1.
  int num_windows() const { return static_cast<int>(starts_.size()); }
  Window window(std::size_t k) const {
    return Window{starts_[k], starts_[k] + window_length_ - 1};
  }
  // coverage()[t-1] = number of windows containing segment t.
  const std::vector<int>& coverage() const { return coverage_; }
  // N < (T+1)/2: the window complements jointly cover every segment, which
  // the auxiliary objective relies on.
  bool aux_valid() const { return 2 * window_length_ < num_segments_ + 1; }

  bool operator==(const WindowSchedule&) const = default;

 private:
  WindowSchedule() = default;

  int num_segments_ = 0;
  int window_length_ = 0;
  int stride_ = 0;
  std::vector<int> starts_;
  std::vector<int> coverage_;
};

// True when every segment lies outside at least one window, by enumeration.
bool ComplementUnionCoversAll(const WindowSchedule& schedule);

// L_i intersected with the label set of the spliced video (window from V_i,
// the rest from V_j). With L_i and L_j disjoint this is exactly the set of
// events V_i has inside the window. Throws PreconditionError when the sets
// overlap.
LabelSet LabelSetIdentity(const LabelSet& primary_labels, const LabelSet& partner_labels,
                          Window window, std::span<const ClassId> primary_segments,
                          std::span<const ClassId> partner_segments, int num_events);

struct ComposedVideo {
  FeatureVideo video;
  // from_primary[t-1] != 0 when segment t was copied from the primary video.
  std::vector<std::uint8_t> from_primary;
};

// Segments inside `window` come from `primary`, the rest from `partner`. The
// composed ground truth is carried for oracle checks only.
ComposedVideo ComposeSynthetic(const FeatureVideo& primary, const FeatureVideo& partner,
                               Window window);

// Any video-level predictor returning C+1 probabilities.
using VideoPredictor = std::function<std::vector<double>(const FeatureVideo&)>;

VideoPredictor ModelPredictor(const ModelParams& params);

// {c <= C : Y(c) * probs(c) >= tau} in vector form.
LabelVector FilterAndThreshold(const LabelVector& video_label, std::span<const double> probs,
                               double tau);

struct RefinedKey {
  std::string video_id;
  int start = 1;
  auto operator<=>(const RefinedKey&) const = default;
};

class RefinedLabels {
 public:
  RefinedLabels(WindowSchedule schedule, double tau, int num_events);

  const WindowSchedule& schedule() const { return schedule_; }
  double tau() const { return tau_; }
  int num_events() const { return num_events_; }
  const std::map<RefinedKey, LabelVector>& entries() const { return entries_; }

  void Set(const std::string& video_id, int start, LabelVector labels);
  // Throws std::out_of_range naming the missing (video, t1).
  const LabelVector& At(const std::string& video_id, int start) const;
  // Throws std::out_of_range naming the first video/window without a record.
  void CheckCovers(std::span<const FeatureVideo> videos) const;

  bool operator==(const RefinedLabels&) const = default;

 private:
  WindowSchedule schedule_;
  double tau_;
  int num_events_;
  std::map<RefinedKey, LabelVector> entries_;
};

struct WindowRefinement {
  int start = 1;
  LabelVector labels;
};

// One partner sampled from `pool` for the video, then one prediction per
// window. Requires tau in (0, 1).
std::vector<WindowRefinement> RefineVideo(const VideoPredictor& predictor,
                                          std::span<const FeatureVideo> pool,
                                          const FeatureVideo& video,
                                          const WindowSchedule& schedule, double tau, Rng& rng);

// Refines every video in `videos` (partners drawn from the same list). The
// per-video stream is root.Derive("refine-partner", id), so the result does
// not depend on `threads`.
RefinedLabels RefineCorpus(const VideoPredictor& predictor, std::span<const FeatureVideo> videos,
                           const WindowSchedule& schedule, double tau, const Rng& root,
                           unsigned threads = 1);

// Every window labelled with the whole video's label (the "dummy" ablation).
RefinedLabels DummyRefinedLabels(std::span<const FeatureVideo> videos,
                                 const WindowSchedule& schedule, int num_events);
// Every window labelled with its true events (ground truth).
RefinedLabels OracleRefinedLabels(std::span<const FeatureVideo> videos,
                                  const WindowSchedule& schedule, int num_events);

// Micro-averaged over every bit (events and background) of every window
// vector present in `truth`.
struct WindowLabelQuality {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision() const;
  double recall() const;
};

WindowLabelQuality CompareRefined(const RefinedLabels& estimate, const RefinedLabels& truth);

// Format:
//   avlr-refined 1
//   refined tau=<tau> N=<N> s=<s> T=<T> C=<C> records=<n>
//   r <video id> <t1> <C+1 bits>
//   end
void SaveRefinedLabels(const RefinedLabels& labels, std::ostream& out);
void SaveRefinedLabels(const RefinedLabels& labels, const std::filesystem::path& path);
RefinedLabels LoadRefinedLabels(std::istream& in);
RefinedLabels LoadRefinedLabels(const std::filesystem::path& path);

}  // namespace avlr

#endif  // AVLR_REFINE_H_
