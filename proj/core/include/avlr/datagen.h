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

// Synthetic audio-visual corpora with known per-segment ground truth.

#ifndef AVLR_DATAGEN_H_
#define AVLR_DATAGEN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "avlr/labels.h"
#include "avlr/numkit.h"
#include "avlr/rng.h"

namespace avlr {

struct FeatureVideo {
  std::string id;
  Matrix audio;   // T x d_a
  Matrix visual;  // T x d_v
  std::vector<ClassId> segment_labels;  // length T, values in [1, C+1]
  LabelVector video_label;              // derived from segment_labels

  int num_segments() const { return static_cast<int>(segment_labels.size()); }
  LabelSet events() const { return video_label.Events(); }

  bool operator==(const FeatureVideo&) const = default;
};

struct CorpusSpec {
  int num_train_events = 300;
  int num_val_events = 50;
  int num_test_events = 50;
  // Event-free videos. They all go to the training split, where they serve as
  // label-disjoint partners for refinement and the auxiliary objective.
  int num_background = 30;
  int num_segments = 10;  // T
  int num_events = 6;     // C
  int audio_dim = 16;
  int visual_dim = 16;
  double noise_sigma = 0.6;
  double prototype_scale = 1.0;
  int min_event_length = 2;
  // Probability that a non-event segment carries a class prototype in exactly
  // one modality (audible or visible, not both).
  double mismatch_rate = 0.2;
  std::uint64_t seed = 1;

  // Throws std::domain_error describing the first violated constraint.
  void Validate() const;

  bool operator==(const CorpusSpec&) const = default;
};

enum class Split { kTrain, kVal, kTest };

struct Corpus {
  CorpusSpec spec;
  // Per-class prototypes, row c-1 for class c, row C for background.
  Matrix audio_prototypes;
  Matrix visual_prototypes;
  std::vector<FeatureVideo> train;
  std::vector<FeatureVideo> val;
  std::vector<FeatureVideo> test;

  const std::vector<FeatureVideo>& split(Split s) const;

  bool operator==(const Corpus&) const = default;
};

Corpus GenerateCorpus(const CorpusSpec& spec, Rng& rng);

void SaveCorpus(const Corpus& corpus, std::ostream& out);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);
// Throws ParseError / VersionError on malformed input.
Corpus LoadCorpus(std::istream& in);
Corpus LoadCorpus(const std::filesystem::path& path);

// Samples a video from `pool` whose event set is disjoint from `video`'s.
// Event-free videos are preferred when any exist. The video itself is never
// returned. Throws NoPartnerError naming the blocking classes.
const FeatureVideo& DisjointPartner(std::span<const FeatureVideo> pool,
                                    const FeatureVideo& video, Rng& rng);

struct CorpusStats {
  std::size_t videos = 0;
  std::size_t segments = 0;
  std::size_t background_segments = 0;
  // event_length_histogram[L] = number of event runs of length L.
  std::vector<std::size_t> event_length_histogram;

  double background_fraction() const {
    return segments == 0 ? 0.0 : static_cast<double>(background_segments) / segments;
  }
};

CorpusStats ComputeStats(std::span<const FeatureVideo> videos, int num_segments,
                         int num_events);

}  // namespace avlr

#endif  // AVLR_DATAGEN_H_
