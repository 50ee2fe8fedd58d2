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

#include "avlr/refine.h"

#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "avlr/errors.h"
#include "avlr/parallel.h"
#include "avlr/textio.h"

namespace avlr {

WindowSchedule WindowSchedule::Make(int num_segments, int window_length, int stride) {
  if (num_segments < 1) throw ScheduleError("schedule needs T >= 1");
  if (window_length < 1 || window_length > num_segments) {
    throw ScheduleError("window length N=" + std::to_string(window_length) +
                        " must lie in [1, T=" + std::to_string(num_segments) + "]");
  }
  if (stride < 1) throw ScheduleError("stride s must be >= 1");
  if ((num_segments - window_length) % stride != 0) {
    throw ScheduleError("stride s=" + std::to_string(stride) + " does not divide T-N=" +
                        std::to_string(num_segments - window_length) +
                        "; the last segments would never be covered");
  }
  if (num_segments > window_length && stride > window_length) {
    throw ScheduleError("stride s=" + std::to_string(stride) + " exceeds window length N=" +
                        std::to_string(window_length) + "; segments between windows would be skipped");
  }
  WindowSchedule s;
  s.num_segments_ = num_segments;
  s.window_length_ = window_length;
  s.stride_ = stride;
  for (int t1 = 1; t1 <= num_segments - window_length + 1; t1 += stride) s.starts_.push_back(t1);
  s.coverage_.assign(static_cast<std::size_t>(num_segments), 0);
  for (int t1 : s.starts_) {
    for (int t = t1; t < t1 + window_length; ++t) ++s.coverage_[static_cast<std::size_t>(t - 1)];
  }
  return s;
}

bool ComplementUnionCoversAll(const WindowSchedule& schedule) {
  for (int t = 1; t <= schedule.num_segments(); ++t) {
    bool outside_some = false;
    for (std::size_t k = 0; k < schedule.starts().size() && !outside_some; ++k) {
      const Window w = schedule.window(k);
      outside_some = t < w.first || t > w.last;
    }
    if (!outside_some) return false;
  }
  return true;
}

namespace {

std::vector<ClassId> SpliceLabels(std::span<const ClassId> primary,
                                  std::span<const ClassId> partner, Window window) {
  if (primary.size() != partner.size()) {
    throw std::domain_error("splice: videos differ in segment count");
  }
  if (window.first < 1 || window.last < window.first ||
      window.last > static_cast<int>(primary.size())) {
    throw std::domain_error("splice: window outside the video");
  }
  std::vector<ClassId> out(partner.begin(), partner.end());
  for (int t = window.first; t <= window.last; ++t) {
    out[static_cast<std::size_t>(t - 1)] = primary[static_cast<std::size_t>(t - 1)];
  }
  return out;
}

}  // namespace

LabelSet LabelSetIdentity(const LabelSet& primary_labels, const LabelSet& partner_labels,
                          Window window, std::span<const ClassId> primary_segments,
                          std::span<const ClassId> partner_segments, int num_events) {
  if (!primary_labels.DisjointFrom(partner_labels)) {
    throw PreconditionError("label sets overlap in " +
                            primary_labels.Intersect(partner_labels).ToString() +
                            "; the window identity needs disjoint video labels");
  }
  // Term (*): events of the spliced video, i.e. L_i[window] u L_j[window]^c.
  const std::vector<ClassId> spliced = SpliceLabels(primary_segments, partner_segments, window);
  const LabelSet spliced_events =
      LabelSet::FromSegments(spliced, num_events, 1, static_cast<int>(spliced.size()));
  return primary_labels.Intersect(spliced_events);
}

ComposedVideo ComposeSynthetic(const FeatureVideo& primary, const FeatureVideo& partner,
                               Window window) {
  if (primary.audio.rows() != partner.audio.rows() ||
      primary.audio.cols() != partner.audio.cols() ||
      primary.visual.cols() != partner.visual.cols() ||
      primary.video_label.size() != partner.video_label.size()) {
    throw std::domain_error("ComposeSynthetic: videos '" + primary.id + "' and '" + partner.id +
                            "' differ in shape");
  }
  ComposedVideo out;
  out.video.id = primary.id + "~" + partner.id + "@" + std::to_string(window.first);
  out.video.audio = partner.audio;
  out.video.visual = partner.visual;
  out.video.segment_labels = SpliceLabels(primary.segment_labels, partner.segment_labels, window);
  out.from_primary.assign(partner.segment_labels.size(), 0);
  for (int t = window.first; t <= window.last; ++t) {
    const auto row = static_cast<std::size_t>(t - 1);
    auto a = primary.audio.row(row);
    auto v = primary.visual.row(row);
    std::copy(a.begin(), a.end(), out.video.audio.row(row).begin());
    std::copy(v.begin(), v.end(), out.video.visual.row(row).begin());
    out.from_primary[row] = 1;
  }
  out.video.video_label =
      VideoLabelFromSegments(out.video.segment_labels, primary.video_label.num_events());
  return out;
}

VideoPredictor ModelPredictor(const ModelParams& params) {
  return [params](const FeatureVideo& video) {
    return VideoPrediction(ForwardScores(params, video), Window{1, video.num_segments()});
  };
}

LabelVector FilterAndThreshold(const LabelVector& video_label, std::span<const double> probs,
                               double tau) {
  if (probs.size() != video_label.size()) {
    throw std::domain_error("FilterAndThreshold: prediction has wrong length");
  }
  LabelSet kept;
  for (ClassId c = 1; c <= video_label.num_events(); ++c) {
    const double z = (video_label.test(c) ? 1.0 : 0.0) * probs[static_cast<std::size_t>(c - 1)];
    if (z >= tau) kept.Insert(c);
  }
  return LabelVector(video_label.num_events(), kept);
}

RefinedLabels::RefinedLabels(WindowSchedule schedule, double tau, int num_events)
    : schedule_(std::move(schedule)), tau_(tau), num_events_(num_events) {}

void RefinedLabels::Set(const std::string& video_id, int start, LabelVector labels) {
  if (labels.num_events() != num_events_) {
    throw std::domain_error("RefinedLabels: label vector has the wrong class count");
  }
  entries_.insert_or_assign(RefinedKey{video_id, start}, std::move(labels));
}

const LabelVector& RefinedLabels::At(const std::string& video_id, int start) const {
  auto it = entries_.find(RefinedKey{video_id, start});
  if (it == entries_.end()) {
    throw std::out_of_range("no refined labels for video '" + video_id + "' at window start t1=" +
                            std::to_string(start));
  }
  return it->second;
}

void RefinedLabels::CheckCovers(std::span<const FeatureVideo> videos) const {
  for (const FeatureVideo& v : videos) {
    for (int t1 : schedule_.starts()) At(v.id, t1);
  }
}

std::vector<WindowRefinement> RefineVideo(const VideoPredictor& predictor,
                                          std::span<const FeatureVideo> pool,
                                          const FeatureVideo& video,
                                          const WindowSchedule& schedule, double tau, Rng& rng) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::domain_error("RefineVideo: tau must lie in (0, 1)");
  if (schedule.num_segments() != video.num_segments()) {
    throw std::domain_error("RefineVideo: schedule T differs from the video's");
  }
  const FeatureVideo& partner = DisjointPartner(pool, video, rng);
  std::vector<WindowRefinement> out;
  out.reserve(schedule.starts().size());
  for (std::size_t k = 0; k < schedule.starts().size(); ++k) {
    const ComposedVideo composed = ComposeSynthetic(video, partner, schedule.window(k));
    const std::vector<double> probs = predictor(composed.video);
    out.push_back({schedule.starts()[k], FilterAndThreshold(video.video_label, probs, tau)});
  }
  return out;
}

RefinedLabels RefineCorpus(const VideoPredictor& predictor, std::span<const FeatureVideo> videos,
                           const WindowSchedule& schedule, double tau, const Rng& root,
                           unsigned threads) {
  if (videos.empty()) throw std::domain_error("RefineCorpus: no videos");
  std::vector<std::vector<WindowRefinement>> per_video(videos.size());
  ParallelFor(videos.size(), threads, [&](std::size_t i) {
    Rng rng = root.Derive("refine-partner", videos[i].id);
    per_video[i] = RefineVideo(predictor, videos, videos[i], schedule, tau, rng);
  });
  RefinedLabels out(schedule, tau, videos.front().video_label.num_events());
  for (std::size_t i = 0; i < videos.size(); ++i) {
    for (auto& w : per_video[i]) out.Set(videos[i].id, w.start, std::move(w.labels));
  }
  return out;
}

RefinedLabels DummyRefinedLabels(std::span<const FeatureVideo> videos,
                                 const WindowSchedule& schedule, int num_events) {
  RefinedLabels out(schedule, 0.5, num_events);
  for (const FeatureVideo& v : videos) {
    for (int t1 : schedule.starts()) out.Set(v.id, t1, v.video_label);
  }
  return out;
}

RefinedLabels OracleRefinedLabels(std::span<const FeatureVideo> videos,
                                  const WindowSchedule& schedule, int num_events) {
  RefinedLabels out(schedule, 0.5, num_events);
  for (const FeatureVideo& v : videos) {
    for (std::size_t k = 0; k < schedule.starts().size(); ++k) {
      const Window w = schedule.window(k);
      out.Set(v.id, w.first,
              LabelVector(num_events, LabelSet::FromSegments(v.segment_labels, num_events,
                                                             w.first, w.last)));
    }
  }
  return out;
}

double WindowLabelQuality::precision() const {
  const std::size_t denom = true_positives + false_positives;
  return denom == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(denom);
}

double WindowLabelQuality::recall() const {
  const std::size_t denom = true_positives + false_negatives;
  return denom == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(denom);
}

WindowLabelQuality CompareRefined(const RefinedLabels& estimate, const RefinedLabels& truth) {
  WindowLabelQuality q;
  for (const auto& [key, want] : truth.entries()) {
    const LabelVector& got = estimate.At(key.video_id, key.start);
    for (std::size_t b = 0; b < want.size(); ++b) {
      const bool g = got.bits()[b] != 0;
      const bool w = want.bits()[b] != 0;
      if (g && w) ++q.true_positives;
      if (g && !w) ++q.false_positives;
      if (!g && w) ++q.false_negatives;
    }
  }
  return q;
}

namespace {
constexpr std::string_view kRefinedMagic = "avlr-refined";
constexpr int kRefinedVersion = 1;
}  // namespace

void SaveRefinedLabels(const RefinedLabels& labels, std::ostream& out) {
  const WindowSchedule& s = labels.schedule();
  out << kRefinedMagic << ' ' << kRefinedVersion << '\n';
  out << "refined tau=" << textio::FormatDouble(labels.tau()) << " N=" << s.window_length()
      << " s=" << s.stride() << " T=" << s.num_segments() << " C=" << labels.num_events()
      << " records=" << labels.entries().size() << '\n';
  for (const auto& [key, vec] : labels.entries()) {
    out << "r " << key.video_id << ' ' << key.start;
    for (auto bit : vec.bits()) out << ' ' << static_cast<int>(bit);
    out << '\n';
  }
  out << "end\n";
}

void SaveRefinedLabels(const RefinedLabels& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  SaveRefinedLabels(labels, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

RefinedLabels LoadRefinedLabels(std::istream& in) {
  textio::LineReader reader(in);
  textio::ExpectHeader(reader, kRefinedMagic, kRefinedVersion);
  std::string line;
  if (!reader.Next(line)) throw ParseError("truncated refined labels: missing header record", 0);
  std::size_t ln = reader.line_number();
  auto tokens = textio::SplitWhitespace(line);
  if (tokens.size() != 7 || tokens[0] != "refined") throw ParseError("expected 'refined' record", ln);
  using textio::ExpectKeyValue;
  const double tau = textio::ParseDouble(ExpectKeyValue(tokens[1], "tau", ln), ln);
  auto as_int = [&](std::string_view tok, std::string_view key) {
    return static_cast<int>(textio::ParseInt(ExpectKeyValue(tok, key, ln), ln));
  };
  const int n = as_int(tokens[2], "N");
  const int s = as_int(tokens[3], "s");
  const int t = as_int(tokens[4], "T");
  const int c = as_int(tokens[5], "C");
  const auto records = textio::ParseU64(ExpectKeyValue(tokens[6], "records", ln), ln);
  if (c < 2) throw ParseError("class count must be >= 2", ln);
  std::optional<RefinedLabels> out;
  try {
    out.emplace(WindowSchedule::Make(t, n, s), tau, c);
  } catch (const ScheduleError& e) {
    throw ParseError(e.what(), ln);
  }
  for (std::uint64_t k = 0; k < records; ++k) {
    if (!reader.Next(line)) throw ParseError("truncated refined labels: missing records", 0);
    ln = reader.line_number();
    tokens = textio::SplitWhitespace(line);
    if (tokens.size() != static_cast<std::size_t>(c) + 4 || tokens[0] != "r") {
      throw ParseError("malformed refined record", ln);
    }
    std::vector<std::uint8_t> bits;
    for (std::size_t b = 3; b < tokens.size(); ++b) {
      const auto v = textio::ParseInt(tokens[b], ln);
      if (v != 0 && v != 1) throw ParseError("label bit must be 0 or 1", ln);
      bits.push_back(static_cast<std::uint8_t>(v));
    }
    try {
      out->Set(std::string(tokens[1]), static_cast<int>(textio::ParseInt(tokens[2], ln)),
               LabelVector::FromBits(std::move(bits)));
    } catch (const std::domain_error& e) {
      throw ParseError(e.what(), ln);
    }
  }
  if (!reader.Next(line) || textio::SplitWhitespace(line) != std::vector<std::string_view>{"end"}) {
    throw ParseError("truncated refined labels: missing 'end' record", 0);
  }
  return std::move(*out);
}

RefinedLabels LoadRefinedLabels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open refined labels '" + path.string() + "'");
  return LoadRefinedLabels(in);
}

}  // namespace avlr
