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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "avlr/datagen.h"
#include "avlr/metrics.h"
#include "avlr/model.h"
#include "avlr/pipeline.h"
#include "avlr/refine.h"
#include "avlr/sweep.h"
#include "cli.h"
#include "testing/oracles.h"

namespace avlr {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

LabelSet ToLabelSet(const std::set<int>& s) {
  LabelSet out;
  for (int c : s) out.Insert(c);
  return out;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::string ReportText(const PipelineReport& r) {
  std::ostringstream out;
  WriteReport(r, out);
  return out.str();
}

Corpus DefaultCorpus(std::uint64_t seed) {
  CorpusSpec spec;
  spec.seed = seed;
  Rng rng(seed);
  return GenerateCorpus(spec, rng);
}

// 1. Label-set identity vs brute-force scan.
Outcome SetIdentity() {
  const auto start = Clock::now();
  Rng rng(101);
  const int c = 6, t = 10;
  std::size_t pairs = 0, windows = 0, mismatches = 0;
  for (; pairs < 1000; ++pairs) {
    const auto [ya, yb] = testing::RandomDisjointLabels(t, c, rng);
    const LabelSet la = VideoLabelFromSegments(ya, c).Events();
    const LabelSet lb = VideoLabelFromSegments(yb, c).Events();
    for (int n = 1; n <= t; ++n) {
      for (int first = 1; first + n - 1 <= t; ++first) {
        const Window w{first, first + n - 1};
        ++windows;
        if (LabelSetIdentity(la, lb, w, ya, yb, c) !=
            ToLabelSet(testing::ScanWindow(ya, c, w.first, w.last))) {
          ++mismatches;
        }
      }
    }
  }
  const double secs = Seconds(start);
  return {mismatches == 0 && secs < 5.0,
          std::to_string(pairs) + " disjoint pairs, " + std::to_string(windows) + " windows, " +
              std::to_string(mismatches) + " mismatches, " + Fmt("%.2f s (limit 5 s)", secs)};
}

// 2. Oracle refinement recovers the true window label sets.
Outcome OracleRefinement() {
  CorpusSpec spec;
  spec.num_train_events = 100;
  spec.num_val_events = spec.num_test_events = 0;
  spec.num_background = 10;
  Rng gen(202);
  const Corpus corpus = GenerateCorpus(spec, gen);
  std::vector<const FeatureVideo*> targets;
  for (const auto& v : corpus.train) {
    if (!v.events().empty()) targets.push_back(&v);
  }
  auto oracle = [](const FeatureVideo& v) {
    const auto& bits = v.video_label.bits();
    return std::vector<double>(bits.begin(), bits.end());
  };
  std::size_t checked = 0, wrong = 0;
  for (auto [n, s] : {std::pair{2, 2}, {3, 1}, {4, 2}, {5, 5}}) {
    const auto sched = WindowSchedule::Make(10, n, s);
    for (double tau : {0.1, 0.5, 0.9}) {
      for (const FeatureVideo* v : targets) {
        Rng rng = Rng(7).Derive("partner", v->id);
        for (const auto& w : RefineVideo(oracle, corpus.train, *v, sched, tau, rng)) {
          ++checked;
          const auto truth = ToLabelSet(testing::ScanWindow(v->segment_labels, 6, w.start, w.start + n - 1));
          if (w.labels != LabelVector(6, truth)) ++wrong;
        }
      }
    }
  }
  return {wrong == 0 && targets.size() == 100,
          std::to_string(targets.size()) + " videos x 4 schedules x 3 thresholds, " +
              std::to_string(checked) + " windows, " + std::to_string(wrong) + " wrong"};
}

// 3. Complement union covers every segment iff N < (T+1)/2.
Outcome CoverageLemma() {
  std::size_t schedules = 0, covering = 0, failures = 0;
  for (int t = 1; t <= 20; ++t) {
    for (int n = 1; n <= t; ++n) {
      for (int s = 1; s <= std::max(1, t - n); ++s) {
        if ((t - n) % s != 0 || (t > n && s > n)) continue;
        const auto sched = WindowSchedule::Make(t, n, s);
        ++schedules;
        const bool covers = ComplementUnionCoversAll(sched);
        covering += covers;
        if (covers != (2 * n < t + 1)) ++failures;
      }
    }
  }
  return {failures == 0 && covering > 0 && covering < schedules,
          std::to_string(schedules) + " schedules (T<=20), " + std::to_string(covering) +
              " covering, " + std::to_string(schedules - covering) + " not, " +
              std::to_string(failures) + " violations"};
}

// 4. Analytic gradients vs central differences.
Outcome GradientFidelity() {
  const auto start = Clock::now();
  Rng rng(404);
  double worst[3] = {0, 0, 0};
  for (int i = 0; i < 20; ++i) {
    ModelConfig m;
    const int t = 4 + static_cast<int>(rng.UniformIndex(3));
    m.num_events = 2 + static_cast<int>(rng.UniformIndex(3));
    m.hidden = 3 + static_cast<int>(rng.UniformIndex(6));
    m.audio_dim = 1 + static_cast<int>(rng.UniformIndex(4));
    m.visual_dim = 1 + static_cast<int>(rng.UniformIndex(4));
    m.context_radius = static_cast<int>(rng.UniformIndex(2));
    Rng init = rng.Derive("init", static_cast<std::uint64_t>(i));
    ModelParams params = ModelParams::Random(m, init);
    for (auto idx : {ModelParams::kB1, ModelParams::kB2}) {
      for (double& x : params.tensors()[idx].data()) x = 0.1 * init.Normal();
    }
    FeatureVideo a, b;
    do {
      a = testing::RandomVideo("a", t, m.num_events, m.audio_dim, m.visual_dim, rng);
      b = testing::RandomVideo("b", t, m.num_events, m.audio_dim, m.visual_dim, rng);
    } while (!a.events().DisjointFrom(b.events()));
    const auto aux_sched = WindowSchedule::Make(t, 2, t == 6 ? 2 : 1);
    const auto lr_sched = WindowSchedule::Make(t, 2, t == 5 ? 1 : 2);
    RefinedLabels refined(lr_sched, 0.05, m.num_events);
    for (int t1 : lr_sched.starts()) {
      LabelSet set;
      for (int c = 1; c <= m.num_events; ++c) {
        if (rng.Uniform() < 0.4) set.Insert(c);
      }
      refined.Set(a.id, t1, LabelVector(m.num_events, set));
    }
    const std::function<LossAndGrad(const ModelParams&)> losses[3] = {
        [&](const ModelParams& p) { return MilLoss(p, a); },
        [&](const ModelParams& p) { return AuxLoss(p, a, b, aux_sched); },
        [&](const ModelParams& p) { return LabelRefinementLoss(p, a, refined); }};
    for (int k = 0; k < 3; ++k) {
      const LossAndGrad lg = losses[k](params);
      const auto report = GradCheck(
          [&](const ParamSet& q) { return losses[k](ModelParams::FromTensors(m, q)).loss; },
          params.tensors(), lg.grads, 1e-4);
      worst[k] = std::max(worst[k], report.max_rel_error);
    }
  }
  const double secs = Seconds(start);
  const bool ok = worst[0] < 1e-4 && worst[1] < 1e-4 && worst[2] < 1e-4 && secs < 30.0;
  return {ok, Fmt("max rel error MIL %.2e, aux %.2e, LR %.2e over 20 instances each; %.2f s",
                  worst[0], worst[1], worst[2], secs)};
}

// 5. Metrics vs brute force, and the GT-repeat identity.
Outcome MetricOracle() {
  Rng rng(505);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int c = 2 + static_cast<int>(rng.UniformIndex(27));
    const std::size_t videos = 1 + rng.UniformIndex(20);
    std::vector<SegmentLabels> truth(videos), pred(videos);
    for (std::size_t v = 0; v < videos; ++v) {
      for (int s = 0; s < 10; ++s) {
        truth[v].push_back(1 + static_cast<int>(rng.UniformIndex(c + 1)));
        // Bias towards correct answers so every branch is exercised.
        pred[v].push_back(rng.Uniform() < 0.4 ? truth[v].back()
                                              : 1 + static_cast<int>(rng.UniformIndex(c + 1)));
      }
    }
    const MetricsReport m = ComputeMetrics(pred, truth, c);
    const testing::BruteMetrics b = testing::BruteForceMetrics(pred, truth, c);
    const bool same = m.accuracy == b.accuracy && m.weighted_f1 == b.weighted_f1 &&
                      m.non_ave.recall == b.non_ave_recall &&
                      m.non_ave.precision == b.non_ave_precision && m.non_ave.f1 == b.non_ave_f1 &&
                      m.ave.recall == b.ave_recall && m.ave.precision == b.ave_precision &&
                      m.ave.f1 == b.ave_f1;
    mismatches += !same;
  }
  const Corpus corpus = DefaultCorpus(1);
  std::vector<SegmentLabels> truth;
  for (const auto& v : corpus.test) truth.push_back(v.segment_labels);
  const MetricsReport gt = ComputeMetrics(GtRepeatPredictions(corpus.test), truth, 6);
  const CorpusStats stats = ComputeStats(corpus.test, 10, 6);
  const double expected = static_cast<double>(stats.segments - stats.background_segments) /
                          static_cast<double>(stats.segments);
  const bool identity = gt.accuracy == expected && gt.non_ave.recall == 0.0;
  return {mismatches == 0 && identity,
          std::to_string(mismatches) + " mismatches in 100 random pairs; GT-repeat accuracy " +
              Fmt("%.4f = 1 - %.4f background fraction, non-AVE recall %.1f", gt.accuracy,
                  stats.background_fraction(), gt.non_ave.recall)};
}

// 6. Desk-scale ablation, medians over five seeds.
Outcome Ablation(std::vector<PipelineReport>& reports) {
  const auto start = Clock::now();
  std::vector<double> base_f1, lr_f1, alr_f1, dummy_f1, pl_f1, lr_prec, alr_prec, base_acc,
      alr_acc;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ModelConfig model;
    model.seed = seed;
    TrainConfig train;
    train.seed = seed;
    reports.push_back(RunAblation(DefaultCorpus(seed), model, train));
    const PipelineReport& r = reports.back();
    base_f1.push_back(100 * r.Get(Variant::kBase).test_metrics.non_ave.f1);
    pl_f1.push_back(100 * r.Get(Variant::kBasePL).test_metrics.non_ave.f1);
    dummy_f1.push_back(100 * r.Get(Variant::kBaseLRDummy).test_metrics.non_ave.f1);
    lr_f1.push_back(100 * r.Get(Variant::kBaseLR).test_metrics.non_ave.f1);
    alr_f1.push_back(100 * r.Get(Variant::kBaseALR).test_metrics.non_ave.f1);
    lr_prec.push_back(100 * r.Get(Variant::kBaseLR).refined_quality->precision());
    alr_prec.push_back(100 * r.Get(Variant::kBaseALR).refined_quality->precision());
    base_acc.push_back(100 * r.Get(Variant::kBase).test_metrics.accuracy);
    alr_acc.push_back(100 * r.Get(Variant::kBaseALR).test_metrics.accuracy);
    std::printf("  seed %llu: non-AVE F1 BASE %.1f PL %.1f LRdummy %.1f LR %.1f A+LR %.1f | "
                "window P LR %.1f A+LR %.1f | acc BASE %.1f A+LR %.1f\n",
                static_cast<unsigned long long>(seed), base_f1.back(), pl_f1.back(),
                dummy_f1.back(), lr_f1.back(), alr_f1.back(), lr_prec.back(), alr_prec.back(),
                base_acc.back(), alr_acc.back());
  }
  const double secs = Seconds(start);
  const double mb = Median(base_f1), ml = Median(lr_f1), ma = Median(alr_f1),
               md = Median(dummy_f1), mlp = Median(lr_prec), map = Median(alr_prec),
               mba = Median(base_acc), maa = Median(alr_acc);
  const bool ok = ml - mb >= 10.0 && ma >= ml && map >= mlp && md <= ml && maa >= mba - 1.0 &&
                  secs < 600.0;
  return {ok, Fmt("median non-AVE F1 BASE %.1f, LR %.1f, A+LR %.1f, LRdummy ", mb, ml, ma) +
                  Fmt("%.1f; window precision LR %.1f, A+LR %.1f; ", md, mlp, map) +
                  Fmt("accuracy BASE %.1f, A+LR %.1f; %.0f s (limit 600 s)", mba, maa, secs)};
}

std::string LineWith(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with(prefix)) return line;
  }
  return {};
}

// 7. Same seeds, same bytes; staged CLI run equals the monolithic variant.
Outcome Determinism(const PipelineReport& first_seed) {
  ModelConfig model;
  TrainConfig train;
  const std::string again = ReportText(RunAblation(DefaultCorpus(1), model, train));
  const bool same_bytes = again == ReportText(first_seed);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "avlr-acceptance-staged";
  fs::remove_all(dir);
  std::ostringstream sink;
  bool cli_ok = true;
  for (const char* cmd : {"gen", "train", "refine", "retrain", "eval"}) {
    const char* argv[] = {"avlr", cmd, "--seed", "1", "--out", dir.c_str()};
    cli_ok &= cli::RunCli(6, argv, sink, sink) == cli::kExitOk;
  }
  std::ifstream in(dir / cli::kEvalFile);
  std::stringstream eval;
  eval << in.rdbuf();
  const std::string staged = LineWith(eval.str(), "metrics method=model");
  const std::string mono = LineWith(ReportText(first_seed), "variant name=BASE+A+LR");
  const bool staged_ok = cli_ok && !staged.empty() && !mono.empty() &&
                         staged.substr(staged.find(" segments=")) == mono.substr(mono.find(" segments="));
  fs::remove_all(dir);
  return {same_bytes && staged_ok,
          std::string("repeat run ") + (same_bytes ? "byte-identical" : "DIFFERS") +
              "; staged gen/train/refine/retrain/eval " +
              (staged_ok ? "matches" : "does not match") + " monolithic BASE+A+LR"};
}

// 8. Sweep harness completeness.
Outcome Sweeps() {
  const auto start = Clock::now();
  const Corpus corpus = DefaultCorpus(1);
  const ModelConfig model;
  const TrainConfig train;
  const std::vector<double> taus = {0.01, 0.03, 0.05, 0.07, 0.10};
  const SweepResult tau = SweepTau(corpus, model, train, taus);
  const std::vector<std::pair<int, int>> grid = {{2, 2}, {3, 1}, {4, 2}, {5, 5}};
  const SweepResult win = SweepWindow(corpus, model, train, grid);
  std::printf("%s%s", FormatSweepTable(tau).c_str(), FormatSweepTable(win).c_str());
  bool ok = tau.cells.size() == 5 && win.cells.size() == 4;
  for (const auto& c : tau.cells) ok &= !c.rejected && c.metrics.has_value();
  const std::vector<int> expected_t1 = {5, 8, 4, 2};
  std::string t1s;
  for (std::size_t i = 0; i < win.cells.size(); ++i) {
    ok &= !win.cells[i].rejected && win.cells[i].metrics.has_value() &&
          win.cells[i].num_windows == expected_t1[i];
    t1s += (i ? "," : "") + std::to_string(win.cells[i].num_windows);
  }
  return {ok, "tau grid 5/5 cells reported; (N,s) grid T1 = {" + t1s + "}" +
                  Fmt(", %.0f s", Seconds(start))};
}

}  // namespace
}  // namespace avlr

int main() {
  using avlr::Outcome;
  int failed = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  report(1, "set-identity exactness", avlr::SetIdentity());
  report(2, "oracle refinement exactness", avlr::OracleRefinement());
  report(3, "coverage lemma", avlr::CoverageLemma());
  report(4, "gradient fidelity", avlr::GradientFidelity());
  report(5, "metric oracle", avlr::MetricOracle());
  std::vector<avlr::PipelineReport> reports;
  report(6, "desk-scale ablation", avlr::Ablation(reports));
  report(7, "determinism", avlr::Determinism(reports.front()));
  report(8, "sweep harness", avlr::Sweeps());
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
