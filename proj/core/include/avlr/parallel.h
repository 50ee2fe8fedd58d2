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

#ifndef AVLR_PARALLEL_H_
#define AVLR_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace avlr {

// Runs body(i) for i in [0, n) on up to `threads` workers (0 or 1 runs
// inline). Each index is visited exactly once. Callers write results into
// per-index slots and reduce them in index order afterwards, so results do
// not depend on the thread count.
void ParallelFor(std::size_t n, unsigned threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace avlr

#endif  // AVLR_PARALLEL_H_
