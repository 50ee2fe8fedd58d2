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

// Line-delimited report records. Example:
//
//   avlr-report 1
//   definitions ave=exact-class-match weighted_f1=support-weighted-with-background
//   corpus T=10 C=6 ... / model ... / train ...
//   variant name=BASE segments=500 accuracy=0.67 weighted_f1=... non_ave_f1=... ...
//   refined variant=BASE+LR precision=... recall=... tp=... fp=... fn=...
//   loss variant=BASE stage=stage1 <values...>
//   end

#include <cstdio>
#include <ostream>
#include <string>

#include "avlr/metrics.h"
#include "avlr/pipeline.h"
#include "avlr/sweep.h"
#include "avlr/textio.h"

namespace avlr {
namespace {

using textio::FormatDouble;

constexpr std::string_view kDefinitions =
    "definitions ave=exact-class-match weighted_f1=support-weighted-with-background "
    "undefined_rate=0";

void WriteQuality(const WindowLabelQuality& q, std::ostream& out) {
  out << " precision=" << FormatDouble(q.precision()) << " recall=" << FormatDouble(q.recall())
      << " tp=" << q.true_positives << " fp=" << q.false_positives << " fn=" << q.false_negatives;
}

}  // namespace

void WriteMetricsFields(const MetricsReport& m, std::ostream& out) {
  out << " segments=" << m.segments << " accuracy=" << FormatDouble(m.accuracy)
      << " weighted_f1=" << FormatDouble(m.weighted_f1)
      << " non_ave_f1=" << FormatDouble(m.non_ave.f1)
      << " non_ave_recall=" << FormatDouble(m.non_ave.recall)
      << " non_ave_precision=" << FormatDouble(m.non_ave.precision)
      << " ave_f1=" << FormatDouble(m.ave.f1) << " ave_recall=" << FormatDouble(m.ave.recall)
      << " ave_precision=" << FormatDouble(m.ave.precision);
}

void WriteReport(const PipelineReport& report, std::ostream& out) {
  const CorpusSpec& c = report.corpus;
  const ModelConfig& m = report.model;
  const TrainConfig& t = report.train;
  out << "avlr-report 1\n" << kDefinitions << '\n';
  out << "corpus T=" << c.num_segments << " C=" << c.num_events << " d_a=" << c.audio_dim
      << " d_v=" << c.visual_dim << " train=" << c.num_train_events << " val=" << c.num_val_events
      << " test=" << c.num_test_events << " background=" << c.num_background
      << " noise=" << FormatDouble(c.noise_sigma) << " mismatch=" << FormatDouble(c.mismatch_rate)
      << " seed=" << c.seed << '\n';
  out << "model hidden=" << m.hidden << " radius=" << m.context_radius << " seed=" << m.seed
      << '\n';
  out << "train stage1_epochs=" << t.stage1_epochs << " stage3_epochs=" << t.stage3_epochs
      << " lr=" << FormatDouble(t.learning_rate) << " batch=" << t.batch_size
      << " tau=" << FormatDouble(t.tau) << " N=" << t.window_length << " s=" << t.stride
      << " aux_weight=" << FormatDouble(t.aux_weight) << " lr_weight=" << FormatDouble(t.lr_weight)
      << " seed=" << t.seed << '\n';
  for (const VariantResult& v : report.variants) {
    out << "variant name=" << VariantName(v.variant);
    WriteMetricsFields(v.test_metrics, out);
    out << '\n';
    for (std::size_t k = 0; k < v.test_metrics.per_class.size(); ++k) {
      out << "class variant=" << VariantName(v.variant) << " class=" << (k + 1)
          << " support=" << v.test_metrics.support[k]
          << " f1=" << FormatDouble(v.test_metrics.per_class[k].f1) << '\n';
    }
    if (v.refined_quality) {
      out << "refined variant=" << VariantName(v.variant);
      WriteQuality(*v.refined_quality, out);
      out << '\n';
    }
    for (const LossCurve& curve : v.loss_curves) {
      out << "loss variant=" << VariantName(v.variant) << " stage=" << curve.stage;
      for (double x : curve.values) out << ' ' << FormatDouble(x);
      out << '\n';
    }
  }
  out << "end\n";
}

std::string FormatAblationTable(const PipelineReport& report) {
  std::vector<TableRow> rows;
  for (const VariantResult& v : report.variants) {
    TableRow row{std::string(VariantName(v.variant)), v.test_metrics, {}};
    if (v.refined_quality) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.1f/%.1f", 100.0 * v.refined_quality->precision(),
                    100.0 * v.refined_quality->recall());
      row.extra = buf;
    } else {
      row.extra = "-";
    }
    rows.push_back(std::move(row));
  }
  return "Segment-level test metrics (%); AVE hits require the exact class; weighted F1 "
         "includes background.\n" +
         FormatMetricsTable(rows, "Window labels P/R");
}

void WriteSweep(const SweepResult& sweep, std::ostream& out) {
  out << "avlr-sweep 1\n" << kDefinitions << '\n';
  out << "sweep parameter=" << sweep.parameter << " cells=" << sweep.cells.size() << '\n';
  for (const SweepCell& cell : sweep.cells) {
    out << "cell label=" << cell.label << " tau=" << FormatDouble(cell.tau)
        << " N=" << cell.window_length << " s=" << cell.stride << " T1=" << cell.num_windows;
    if (cell.rejected) {
      out << " status=rejected\n";
      out << "reason label=" << cell.label << ' ' << cell.reason << '\n';
      continue;
    }
    out << " status=ok";
    if (cell.metrics) WriteMetricsFields(*cell.metrics, out);
    out << '\n';
    if (cell.refined_quality) {
      out << "refined label=" << cell.label;
      WriteQuality(*cell.refined_quality, out);
      out << '\n';
    }
  }
  out << "end\n";
}

}  // namespace avlr
