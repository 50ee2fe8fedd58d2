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

#include "avlr/datagen.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "avlr/errors.h"

namespace avlr {
namespace {

std::string MakeId(std::string_view prefix, int index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return std::string(prefix) + "-" + digits;
}

// Random unit directions, orthogonalized while the dimension allows it.
Matrix MakePrototypes(int count, int dim, double scale, Rng& rng) {
  Matrix out(static_cast<std::size_t>(count), static_cast<std::size_t>(dim));
  for (int k = 0; k < count; ++k) {
    auto row = out.row(static_cast<std::size_t>(k));
    for (double& x : row) x = rng.Normal();
    if (k < dim) {
      for (int j = 0; j < k; ++j) {
        auto prev = out.row(static_cast<std::size_t>(j));
        double dot = 0.0;
        for (int d = 0; d < dim; ++d) dot += row[d] * prev[d];
        for (int d = 0; d < dim; ++d) row[d] -= dot * prev[d] / (scale * scale);
      }
    }
    double norm = 0.0;
    for (double x : row) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : row) x *= scale / norm;
  }
  return out;
}

void FillSegment(Matrix& features, int t, const Matrix& prototypes, ClassId row_class,
                 double sigma, Rng& rng) {
  auto dst = features.row(static_cast<std::size_t>(t));
  auto proto = prototypes.row(static_cast<std::size_t>(row_class - 1));
  for (std::size_t d = 0; d < dst.size(); ++d) dst[d] = proto[d] + sigma * rng.Normal();
}

struct Generator {
  const CorpusSpec& spec;
  const Matrix& audio_protos;
  const Matrix& visual_protos;

  // A non-event segment: background in both modalities, or (mismatch) the
  // prototype of `hint_class` in exactly one modality.
  void FillNonEvent(FeatureVideo& v, int t, ClassId hint_class, Rng& rng) const {
    const ClassId bg = BackgroundId(spec.num_events);
    ClassId audio_class = bg;
    ClassId visual_class = bg;
    if (rng.Uniform() < spec.mismatch_rate) {
      if (rng.Uniform() < 0.5) {
        audio_class = hint_class;
      } else {
        visual_class = hint_class;
      }
    }
    FillSegment(v.audio, t, audio_protos, audio_class, spec.noise_sigma, rng);
    FillSegment(v.visual, t, visual_protos, visual_class, spec.noise_sigma, rng);
  }

  FeatureVideo EventVideo(std::string id, Rng& rng) const {
    const int t_count = spec.num_segments;
    const ClassId c = static_cast<ClassId>(rng.UniformIndex(spec.num_events)) + 1;
    std::vector<std::pair<int, int>> windows;
    for (int a = 1; a <= t_count; ++a) {
      for (int b = a + spec.min_event_length - 1; b <= t_count; ++b) windows.emplace_back(a, b);
    }
    const auto [first, last] = windows[rng.UniformIndex(windows.size())];

    FeatureVideo v = Blank(std::move(id));
    for (int t = 1; t <= t_count; ++t) {
      if (t >= first && t <= last) {
        v.segment_labels[t - 1] = c;
        FillSegment(v.audio, t - 1, audio_protos, c, spec.noise_sigma, rng);
        FillSegment(v.visual, t - 1, visual_protos, c, spec.noise_sigma, rng);
      } else {
        FillNonEvent(v, t - 1, c, rng);
      }
    }
    v.video_label = VideoLabelFromSegments(v.segment_labels, spec.num_events);
    return v;
  }

  FeatureVideo BackgroundVideo(std::string id, Rng& rng) const {
    FeatureVideo v = Blank(std::move(id));
    for (int t = 0; t < spec.num_segments; ++t) {
      const ClassId hint = static_cast<ClassId>(rng.UniformIndex(spec.num_events)) + 1;
      FillNonEvent(v, t, hint, rng);
    }
    v.video_label = VideoLabelFromSegments(v.segment_labels, spec.num_events);
    return v;
  }

  FeatureVideo Blank(std::string id) const {
    FeatureVideo v;
    v.id = std::move(id);
    v.audio = Matrix(spec.num_segments, spec.audio_dim);
    v.visual = Matrix(spec.num_segments, spec.visual_dim);
    v.segment_labels.assign(static_cast<std::size_t>(spec.num_segments),
                            BackgroundId(spec.num_events));
    return v;
  }
};

}  // namespace

void CorpusSpec::Validate() const {
  auto fail = [](const std::string& what) { throw std::domain_error("CorpusSpec: " + what); };
  if (num_train_events < 0 || num_val_events < 0 || num_test_events < 0 || num_background < 0)
    fail("video counts must be non-negative");
  if (num_train_events + num_background == 0) fail("training split would be empty");
  if (num_segments < 1) fail("T must be at least 1");
  if (num_events < 2) fail("C must be at least 2");
  if (audio_dim < 1 || visual_dim < 1) fail("feature dimensions must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise sigma must be >= 0");
  if (!(prototype_scale > 0.0) || !std::isfinite(prototype_scale))
    fail("prototype scale must be > 0");
  if (min_event_length < 2 || min_event_length > num_segments) {
    fail("min event length " + std::to_string(min_event_length) + " must lie in [2, T=" +
         std::to_string(num_segments) + "]");
  }
  if (!(mismatch_rate >= 0.0 && mismatch_rate <= 1.0)) fail("mismatch rate must lie in [0, 1]");
}

const std::vector<FeatureVideo>& Corpus::split(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kVal: return val;
    case Split::kTest: return test;
  }
  throw std::domain_error("Corpus::split: unknown split");
}

Corpus GenerateCorpus(const CorpusSpec& spec, Rng& rng) {
  spec.Validate();
  Corpus corpus;
  corpus.spec = spec;
  Rng proto_rng = rng.Derive("prototypes");
  corpus.audio_prototypes =
      MakePrototypes(spec.num_events + 1, spec.audio_dim, spec.prototype_scale, proto_rng);
  corpus.visual_prototypes =
      MakePrototypes(spec.num_events + 1, spec.visual_dim, spec.prototype_scale, proto_rng);

  Generator gen{spec, corpus.audio_prototypes, corpus.visual_prototypes};
  auto make_events = [&](std::string_view prefix, int count, std::vector<FeatureVideo>& out) {
    for (int i = 0; i < count; ++i) {
      std::string id = MakeId(prefix, i);
      Rng video_rng = rng.Derive("video", id);
      out.push_back(gen.EventVideo(std::move(id), video_rng));
    }
  };
  make_events("train", spec.num_train_events, corpus.train);
  make_events("val", spec.num_val_events, corpus.val);
  make_events("test", spec.num_test_events, corpus.test);
  for (int i = 0; i < spec.num_background; ++i) {
    std::string id = MakeId("bg", i);
    Rng video_rng = rng.Derive("video", id);
    corpus.train.push_back(gen.BackgroundVideo(std::move(id), video_rng));
  }
  return corpus;
}

const FeatureVideo& DisjointPartner(std::span<const FeatureVideo> pool,
                                    const FeatureVideo& video, Rng& rng) {
  const LabelSet mine = video.events();
  std::vector<std::size_t> empty_sets;
  std::vector<std::size_t> disjoint;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const FeatureVideo& other = pool[k];
    if (other.id == video.id) continue;
    const LabelSet theirs = other.events();
    if (theirs.empty()) {
      empty_sets.push_back(k);
    } else if (theirs.DisjointFrom(mine)) {
      disjoint.push_back(k);
    }
  }
  const auto& candidates = empty_sets.empty() ? disjoint : empty_sets;
  if (candidates.empty()) {
    throw NoPartnerError("no label-disjoint partner for video '" + video.id +
                         "': every other video shares a class in " + mine.ToString());
  }
  return pool[candidates[rng.UniformIndex(candidates.size())]];
}

CorpusStats ComputeStats(std::span<const FeatureVideo> videos, int num_segments,
                         int num_events) {
  CorpusStats stats;
  stats.event_length_histogram.assign(static_cast<std::size_t>(num_segments) + 1, 0);
  for (const FeatureVideo& v : videos) {
    ++stats.videos;
    int run = 0;
    ClassId run_class = 0;
    auto close_run = [&] {
      if (run > 0) ++stats.event_length_histogram[static_cast<std::size_t>(run)];
      run = 0;
    };
    for (ClassId c : v.segment_labels) {
      ++stats.segments;
      if (c > num_events) {
        ++stats.background_segments;
        close_run();
      } else {
        if (run > 0 && c != run_class) close_run();
        run_class = c;
        ++run;
      }
    }
    close_run();
  }
  return stats;
}

}  // namespace avlr
