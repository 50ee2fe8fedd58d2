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

// Run configuration for the avlr command-line tool. A config file is an INI
// file with [run], [corpus], [model], [train] and [sweep] sections; every key
// is optional and unknown keys are rejected.

#ifndef AVLR_TOOLS_RUN_CONFIG_H_
#define AVLR_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/model.h"
#include "avlr/pipeline.h"

namespace avlr::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // Root seed; the corpus, model and training seeds all derive from it.
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "avlr-out";
  CorpusSpec corpus;
  ModelConfig model;
  TrainConfig train;
  std::string sweep_parameter = "tau";
  std::vector<double> sweep_taus = {0.01, 0.03, 0.05, 0.07, 0.10};
  std::vector<std::pair<int, int>> sweep_windows = {{2, 2}, {3, 1}, {4, 2}, {5, 5}};

  // Pushes the root seed and the corpus dimensions into the sub-configs.
  void Resolve();
  // Throws ConfigError (wrapping the module's own message) on the first problem.
  void Validate() const;
};

// Overlays keys from an INI stream onto `config`.
void ApplyIni(std::istream& in, RunConfig& config);
void ApplyIniFile(const std::filesystem::path& path, RunConfig& config);

// Every key, resolved, in a form ApplyIni reads back.
void WriteIni(const RunConfig& config, std::ostream& out);

// Parses "N,s".
std::pair<int, int> ParseWindow(const std::string& text);

}  // namespace avlr::cli

#endif  // AVLR_TOOLS_RUN_CONFIG_H_
