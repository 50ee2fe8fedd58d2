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

#include "avlr/labels.h"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace avlr {

LabelSet::LabelSet(std::initializer_list<ClassId> ids) {
  for (ClassId id : ids) Insert(id);
}

LabelSet LabelSet::FromSegments(std::span<const ClassId> segment_labels, int num_events,
                                int first, int last) {
  const int t = static_cast<int>(segment_labels.size());
  if (first < 1 || last > t || first > last) {
    throw std::domain_error("LabelSet::FromSegments: window out of range");
  }
  LabelSet out;
  for (int i = first; i <= last; ++i) {
    const ClassId c = segment_labels[static_cast<std::size_t>(i - 1)];
    if (c >= 1 && c <= num_events) out.Insert(c);
  }
  return out;
}

LabelSet LabelSet::OutsideSegments(std::span<const ClassId> segment_labels, int num_events,
                                   int first, int last) {
  const int t = static_cast<int>(segment_labels.size());
  if (first < 1 || last > t || first > last) {
    throw std::domain_error("LabelSet::OutsideSegments: window out of range");
  }
  LabelSet out;
  for (int i = 1; i <= t; ++i) {
    if (i >= first && i <= last) continue;
    const ClassId c = segment_labels[static_cast<std::size_t>(i - 1)];
    if (c >= 1 && c <= num_events) out.Insert(c);
  }
  return out;
}

void LabelSet::Insert(ClassId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

bool LabelSet::Contains(ClassId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

LabelSet LabelSet::Intersect(const LabelSet& other) const {
  LabelSet out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
  return out;
}

LabelSet LabelSet::Union(const LabelSet& other) const {
  LabelSet out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

std::string LabelSet::ToString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids_[i]);
  }
  return out + "}";
}

LabelVector::LabelVector(int num_events, const LabelSet& events)
    : bits_(static_cast<std::size_t>(num_events) + 1, 0) {
  if (num_events < 1) throw std::domain_error("LabelVector: need at least one event class");
  for (ClassId c : events) {
    if (c < 1 || c > num_events) {
      throw std::domain_error("LabelVector: event id " + std::to_string(c) + " outside [1, " +
                              std::to_string(num_events) + "]");
    }
    bits_[static_cast<std::size_t>(c - 1)] = 1;
  }
  bits_.back() = events.empty() ? 1 : 0;
}

LabelVector LabelVector::FromBits(std::vector<std::uint8_t> bits) {
  if (bits.size() < 2) throw std::domain_error("LabelVector: need at least two bits");
  bool any_event = false;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::domain_error("LabelVector: bits must be 0 or 1");
    if (i + 1 < bits.size() && bits[i]) any_event = true;
  }
  if ((bits.back() != 0) == any_event) {
    throw std::domain_error("LabelVector: background bit must be set iff no event bit is");
  }
  LabelVector out;
  out.bits_ = std::move(bits);
  return out;
}

LabelSet LabelVector::Events() const {
  LabelSet out;
  for (std::size_t i = 0; i + 1 < bits_.size(); ++i) {
    if (bits_[i]) out.Insert(static_cast<ClassId>(i + 1));
  }
  return out;
}

std::vector<double> LabelVector::AsTarget() const {
  return std::vector<double>(bits_.begin(), bits_.end());
}

LabelVector VideoLabelFromSegments(std::span<const ClassId> segment_labels, int num_events) {
  if (segment_labels.empty()) throw std::domain_error("VideoLabelFromSegments: no segments");
  return LabelVector(num_events,
                     LabelSet::FromSegments(segment_labels, num_events, 1,
                                            static_cast<int>(segment_labels.size())));
}

}  // namespace avlr
