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

#include "avlr/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace avlr {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t SplitMix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Combine(std::uint64_t a, std::uint64_t b) {
  return SplitMix(a ^ (SplitMix(b) + kGolden + (a << 6) + (a >> 2)));
}

}  // namespace

std::uint64_t StableHash(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t Rng::NextU64() {
  ++counter_;
  return SplitMix(seed_ + counter_ * kGolden);
}

double Rng::Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

std::size_t Rng::UniformIndex(std::size_t n) {
  if (n == 0) throw std::domain_error("Rng::UniformIndex: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Reject the top sliver so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::Derive(std::string_view purpose) const {
  return Rng(Combine(seed_, StableHash(purpose)));
}

Rng Rng::Derive(std::string_view purpose, std::string_view id) const {
  return Rng(Combine(Combine(seed_, StableHash(purpose)), StableHash(id)));
}

Rng Rng::Derive(std::string_view purpose, std::uint64_t index) const {
  return Rng(Combine(Combine(seed_, StableHash(purpose)), index));
}

}  // namespace avlr
