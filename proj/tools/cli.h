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

#ifndef AVLR_TOOLS_CLI_H_
#define AVLR_TOOLS_CLI_H_

#include <iosfwd>
#include <string_view>

namespace avlr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

// Artifact names inside the output directory.
inline constexpr std::string_view kCorpusFile = "corpus.txt";
inline constexpr std::string_view kStage1File = "stage1.ckpt";
inline constexpr std::string_view kRefinedFile = "refined.txt";
inline constexpr std::string_view kStage3File = "stage3.ckpt";
inline constexpr std::string_view kEvalFile = "eval-report.txt";
inline constexpr std::string_view kAblationFile = "ablation-report.txt";
inline constexpr std::string_view kAblationTableFile = "ablation-table.txt";
inline constexpr std::string_view kResolvedConfigFile = "resolved-config.ini";

// Entry point behind the avlr binary. Log lines go to `err`, tables and
// summaries to `out`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace avlr::cli

#endif  // AVLR_TOOLS_CLI_H_
