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

#include "avlr/sweep.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "avlr/errors.h"
#include "avlr/textio.h"

namespace avlr {

SweepResult SweepTau(const Corpus& corpus, const ModelConfig& model, const TrainConfig& config,
                     std::span<const double> taus) {
  std::set<double> seen;
  for (double tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw std::domain_error("tau sweep value " + textio::FormatDouble(tau) +
                              " is outside (0, 1)");
    }
    if (!seen.insert(tau).second) {
      throw std::domain_error("tau sweep value " + textio::FormatDouble(tau) + " appears twice");
    }
  }
  config.Validate(corpus.spec.num_segments, true);
  const WindowSchedule schedule = config.Schedule(corpus.spec.num_segments);
  const RefinedLabels oracle = OracleRefinedLabels(corpus.train, schedule, corpus.spec.num_events);
  const TrainResult aux = TrainStage1(corpus, model, config, true);

  SweepResult out{"tau", {}};
  for (double tau : taus) {
    TrainConfig cell_config = config;
    cell_config.tau = tau;
    const RefinedLabels refined = RefineWithModel(corpus, aux.params, cell_config);
    const TrainResult stage3 = TrainStage3(corpus, refined, model, cell_config);
    SweepCell cell;
    cell.label = "tau=" + textio::FormatDouble(tau);
    cell.tau = tau;
    cell.window_length = schedule.window_length();
    cell.stride = schedule.stride();
    cell.num_windows = schedule.num_windows();
    cell.metrics = EvaluateModel(stage3.params, corpus.test);
    cell.refined_quality = CompareRefined(refined, oracle);
    out.cells.push_back(std::move(cell));
  }
  return out;
}

SweepResult SweepWindow(const Corpus& corpus, const ModelConfig& model,
                        const TrainConfig& config, std::span<const std::pair<int, int>> choices) {
  std::set<std::pair<int, int>> seen;
  for (const auto& choice : choices) {
    if (!seen.insert(choice).second) {
      throw std::domain_error("window sweep lists (N=" + std::to_string(choice.first) +
                              ", s=" + std::to_string(choice.second) + ") twice");
    }
  }
  SweepResult out{"window", {}};
  const int t = corpus.spec.num_segments;
  for (const auto& [n, s] : choices) {
    SweepCell cell;
    cell.label = "N=" + std::to_string(n) + ",s=" + std::to_string(s);
    cell.tau = config.tau;
    cell.window_length = n;
    cell.stride = s;
    TrainConfig cell_config = config;
    cell_config.window_length = n;
    cell_config.stride = s;
    try {
      cell_config.Validate(t, true);
    } catch (const ScheduleError& e) {
      cell.rejected = true;
      cell.reason = e.what();
      out.cells.push_back(std::move(cell));
      continue;
    }
    cell.num_windows = cell_config.Schedule(t).num_windows();
    VariantResult result = RunFullMethod(corpus, model, cell_config);
    cell.metrics = std::move(result.test_metrics);
    cell.refined_quality = result.refined_quality;
    out.cells.push_back(std::move(cell));
  }
  return out;
}

std::string FormatSweepTable(const SweepResult& sweep) {
  std::vector<TableRow> rows;
  for (const SweepCell& cell : sweep.cells) {
    TableRow row{cell.label, cell.metrics, {}};
    row.extra = cell.rejected ? "rejected: " + cell.reason : std::to_string(cell.num_windows);
    rows.push_back(std::move(row));
  }
  return FormatMetricsTable(rows, "T1");
}

}  // namespace avlr
