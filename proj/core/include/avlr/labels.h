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

// Class ids are 1-based: events are 1..C and the background class is C+1.
// Segment positions in public APIs are 1-based as well.

#ifndef AVLR_LABELS_H_
#define AVLR_LABELS_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace avlr {

using ClassId = int;

inline constexpr ClassId BackgroundId(int num_events) { return num_events + 1; }

// A set of event class ids (background excluded), kept sorted.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<ClassId> ids);

  // Event classes appearing in segments [first, last] (1-based, inclusive).
  static LabelSet FromSegments(std::span<const ClassId> segment_labels, int num_events,
                               int first, int last);
  // Event classes appearing anywhere outside [first, last].
  static LabelSet OutsideSegments(std::span<const ClassId> segment_labels, int num_events,
                                  int first, int last);

  void Insert(ClassId id);
  bool Contains(ClassId id) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<ClassId>& ids() const { return ids_; }

  LabelSet Intersect(const LabelSet& other) const;
  LabelSet Union(const LabelSet& other) const;
  bool DisjointFrom(const LabelSet& other) const { return Intersect(other).empty(); }

  std::string ToString() const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<ClassId> ids_;
};

// {0,1}^(C+1) form of a label set. The background bit is set exactly when no
// event bit is.
class LabelVector {
 public:
  LabelVector() = default;
  LabelVector(int num_events, const LabelSet& events);

  // Builds from raw bits (length C+1). Throws std::domain_error when the
  // background bit disagrees with the event bits.
  static LabelVector FromBits(std::vector<std::uint8_t> bits);

  int num_events() const { return static_cast<int>(bits_.size()) - 1; }
  std::size_t size() const { return bits_.size(); }
  bool test(ClassId id) const { return bits_.at(static_cast<std::size_t>(id - 1)) != 0; }
  bool background() const { return bits_.back() != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  LabelSet Events() const;
  // As a real-valued loss target.
  std::vector<double> AsTarget() const;

  bool operator==(const LabelVector&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Video-level label derived from segment labels.
LabelVector VideoLabelFromSegments(std::span<const ClassId> segment_labels, int num_events);

}  // namespace avlr

#endif  // AVLR_LABELS_H_
