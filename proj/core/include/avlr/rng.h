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

#ifndef AVLR_RNG_H_
#define AVLR_RNG_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace avlr {

// 64-bit FNV-1a. Used to turn purpose strings and video ids into seeds.
std::uint64_t StableHash(std::string_view text);

// Counter-based generator: draw k is SplitMix64(seed + k * golden). The
// sequence depends only on the seed, never on the platform or the standard
// library, so distributions are implemented here rather than taken from
// <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);
  // Standard normal via Box-Muller (one value per call).
  double Normal();

  // Independent stream for a named purpose, optionally keyed by an id.
  // Depends on the seed only, not on how many values were drawn.
  Rng Derive(std::string_view purpose) const;
  Rng Derive(std::string_view purpose, std::string_view id) const;
  Rng Derive(std::string_view purpose, std::uint64_t index) const;

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace avlr

#endif  // AVLR_RNG_H_
