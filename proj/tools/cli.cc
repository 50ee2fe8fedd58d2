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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "avlr/datagen.h"
#include "avlr/errors.h"
#include "avlr/metrics.h"
#include "avlr/model.h"
#include "avlr/pipeline.h"
#include "avlr/refine.h"
#include "avlr/sweep.h"
#include "avlr/textio.h"
#include "run_config.h"

namespace avlr::cli {
namespace {

namespace fs = std::filesystem;

class MissingArtifact : public std::runtime_error {
 public:
  explicit MissingArtifact(const fs::path& path)
      : std::runtime_error("missing input artifact '" + path.string() + "'") {}
};

enum class LogLevel { kQuiet, kInfo, kDebug };

// AVLR_LOG=quiet|info|debug; anything else means info.
LogLevel LevelFromEnv() {
  const char* v = std::getenv("AVLR_LOG");
  if (v == nullptr) return LogLevel::kInfo;
  const std::string_view s(v);
  if (s == "quiet") return LogLevel::kQuiet;
  if (s == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

class Logger {
 public:
  Logger(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}

  void Info(const std::string& msg) const {
    if (level_ != LogLevel::kQuiet) sink_ << "[avlr] " << msg << '\n';
  }
  void Debug(const std::string& msg) const {
    if (level_ == LogLevel::kDebug) sink_ << "[avlr:debug] " << msg << '\n';
  }

 private:
  std::ostream& sink_;
  LogLevel level_;
};

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<double> tau;
  std::optional<std::string> window;
  std::optional<std::string> sweep;
  std::string checkpoint;
  bool no_aux = false;
};

struct Context {
  RunConfig config;
  Options options;
  std::ostream& out;
  Logger log;

  fs::path Artifact(std::string_view name) const { return config.out_dir / name; }
};

fs::path RequireArtifact(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifact(path);
  return path;
}

template <typename Writer>
void WriteFile(const fs::path& path, Writer&& write) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Corpus LoadInputCorpus(Context& ctx) {
  const fs::path path = RequireArtifact(ctx.Artifact(kCorpusFile));
  Corpus corpus = LoadCorpus(path);
  // The stored corpus is authoritative for shapes.
  ctx.config.model.audio_dim = corpus.spec.audio_dim;
  ctx.config.model.visual_dim = corpus.spec.visual_dim;
  ctx.config.model.num_events = corpus.spec.num_events;
  ctx.log.Debug("loaded " + path.string());
  return corpus;
}

ModelParams LoadInputCheckpoint(const Context& ctx, const fs::path& path, const Corpus& corpus) {
  ModelParams params = LoadCheckpoint(RequireArtifact(path));
  const ModelConfig& m = params.config();
  if (m.audio_dim != corpus.spec.audio_dim || m.visual_dim != corpus.spec.visual_dim ||
      m.num_events != corpus.spec.num_events) {
    throw std::domain_error("checkpoint '" + path.string() + "' does not match the corpus shape");
  }
  ctx.log.Debug("loaded " + path.string());
  return params;
}

int CmdGen(Context& ctx) {
  Rng rng(ctx.config.corpus.seed);
  const Corpus corpus = GenerateCorpus(ctx.config.corpus, rng);
  const fs::path path = ctx.Artifact(kCorpusFile);
  SaveCorpus(corpus, path);
  ctx.log.Info("wrote " + path.string());
  const CorpusSpec& s = corpus.spec;
  ctx.out << "corpus train=" << corpus.train.size() << " val=" << corpus.val.size()
          << " test=" << corpus.test.size() << " T=" << s.num_segments << " C=" << s.num_events
          << '\n';
  for (Split split : {Split::kTrain, Split::kVal, Split::kTest}) {
    const auto& videos = corpus.split(split);
    if (videos.empty()) continue;
    const CorpusStats st = ComputeStats(videos, s.num_segments, s.num_events);
    ctx.out << "stats split="
            << (split == Split::kTrain ? "train" : split == Split::kVal ? "val" : "test")
            << " segments=" << st.segments
            << " background_fraction=" << textio::FormatDouble(st.background_fraction())
            << " event_lengths=";
    bool first = true;
    for (std::size_t len = 1; len < st.event_length_histogram.size(); ++len) {
      if (st.event_length_histogram[len] == 0) continue;
      ctx.out << (first ? "" : ",") << len << ':' << st.event_length_histogram[len];
      first = false;
    }
    if (first) ctx.out << '-';
    ctx.out << '\n';
  }
  return kExitOk;
}

int CmdTrain(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  const bool with_aux = !ctx.options.no_aux;
  ctx.log.Info(std::string("training stage 1") + (with_aux ? " with auxiliary objective" : ""));
  const TrainResult result = TrainStage1(corpus, ctx.config.model, ctx.config.train, with_aux);
  const fs::path path = ctx.Artifact(kStage1File);
  SaveCheckpoint(result.params, path);
  ctx.log.Info("wrote " + path.string());
  ctx.out << "stage1 epochs=" << result.loss_curve.size()
          << " final_loss=" << textio::FormatDouble(result.loss_curve.back()) << '\n';
  return kExitOk;
}

int CmdRefine(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  const ModelParams base = LoadInputCheckpoint(ctx, ctx.Artifact(kStage1File), corpus);
  const RefinedLabels refined = RefineWithModel(corpus, base, ctx.config.train);
  const fs::path path = ctx.Artifact(kRefinedFile);
  SaveRefinedLabels(refined, path);
  ctx.log.Info("wrote " + path.string());
  const WindowLabelQuality q = CompareRefined(
      refined, OracleRefinedLabels(corpus.train, refined.schedule(), corpus.spec.num_events));
  ctx.out << "refined windows=" << refined.entries().size()
          << " precision=" << textio::FormatDouble(q.precision())
          << " recall=" << textio::FormatDouble(q.recall()) << '\n';
  return kExitOk;
}

int CmdRetrain(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  const RefinedLabels refined = LoadRefinedLabels(RequireArtifact(ctx.Artifact(kRefinedFile)));
  if (refined.num_events() != corpus.spec.num_events ||
      refined.schedule().num_segments() != corpus.spec.num_segments) {
    throw std::domain_error("refined labels do not match the corpus shape");
  }
  ctx.log.Info("retraining with refined window labels");
  const TrainResult result = TrainStage3(corpus, refined, ctx.config.model, ctx.config.train);
  const fs::path path = ctx.Artifact(kStage3File);
  SaveCheckpoint(result.params, path);
  ctx.log.Info("wrote " + path.string());
  ctx.out << "stage3 epochs=" << result.loss_curve.size()
          << " final_loss=" << textio::FormatDouble(result.loss_curve.back()) << '\n';
  return kExitOk;
}

int CmdEval(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  const fs::path ckpt =
      ctx.options.checkpoint.empty() ? ctx.Artifact(kStage3File) : fs::path(ctx.options.checkpoint);
  const ModelParams params = LoadInputCheckpoint(ctx, ckpt, corpus);
  const MetricsReport model = EvaluateModel(params, corpus.test);
  const NaiveBaselines naive = RunNaiveBaselines(corpus.test, params);
  const fs::path path = ctx.Artifact(kEvalFile);
  WriteFile(path, [&](std::ostream& f) {
    f << "avlr-eval 1\n";
    f << "split name=test videos=" << corpus.test.size() << '\n';
    for (const auto& [name, m] : {std::pair<const char*, const MetricsReport*>{"model", &model},
                                  {"AVE-repeat", &naive.ave_repeat},
                                  {"GT-repeat", &naive.gt_repeat}}) {
      f << "metrics method=" << name;
      WriteMetricsFields(*m, f);
      f << '\n';
    }
    f << "end\n";
  });
  ctx.log.Info("wrote " + path.string());
  const std::vector<TableRow> rows = {{"model", model, {}},
                                      {"AVE-repeat", naive.ave_repeat, {}},
                                      {"GT-repeat", naive.gt_repeat, {}}};
  ctx.out << FormatMetricsTable(rows);
  return kExitOk;
}

int CmdAblate(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  ctx.log.Info("running the five ablation variants");
  const PipelineReport report = RunAblation(corpus, ctx.config.model, ctx.config.train);
  const std::string table = FormatAblationTable(report);
  WriteFile(ctx.Artifact(kAblationFile), [&](std::ostream& f) { WriteReport(report, f); });
  WriteFile(ctx.Artifact(kAblationTableFile), [&](std::ostream& f) { f << table; });
  ctx.log.Info("wrote " + ctx.Artifact(kAblationFile).string());
  ctx.out << table;
  return kExitOk;
}

int CmdSweep(Context& ctx) {
  const Corpus corpus = LoadInputCorpus(ctx);
  const std::string& param = ctx.config.sweep_parameter;
  ctx.log.Info("sweeping " + param);
  const SweepResult result =
      param == "tau"
          ? SweepTau(corpus, ctx.config.model, ctx.config.train, ctx.config.sweep_taus)
          : SweepWindow(corpus, ctx.config.model, ctx.config.train, ctx.config.sweep_windows);
  const std::string table = FormatSweepTable(result);
  const fs::path report = ctx.Artifact("sweep-" + param + ".txt");
  WriteFile(report, [&](std::ostream& f) { WriteSweep(result, f); });
  WriteFile(ctx.Artifact("sweep-" + param + "-table.txt"), [&](std::ostream& f) { f << table; });
  ctx.log.Info("wrote " + report.string());
  ctx.out << table;
  return kExitOk;
}

RunConfig BuildConfig(const Options& opt) {
  RunConfig config;
  if (!opt.config_path.empty()) ApplyIniFile(opt.config_path, config);
  if (opt.seed) config.seed = *opt.seed;
  if (opt.out_dir) config.out_dir = *opt.out_dir;
  if (opt.threads) config.train.threads = *opt.threads;
  if (opt.tau) config.train.tau = *opt.tau;
  if (opt.window) {
    try {
      std::tie(config.train.window_length, config.train.stride) = ParseWindow(*opt.window);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("--window: ") + e.what());
    }
  }
  if (opt.sweep) config.sweep_parameter = *opt.sweep;
  config.Resolve();
  config.Validate();
  return config;
}

int Dispatch(Context& ctx) {
  const std::string& c = ctx.options.command;
  if (c == "gen") return CmdGen(ctx);
  if (c == "train") return CmdTrain(ctx);
  if (c == "refine") return CmdRefine(ctx);
  if (c == "retrain") return CmdRetrain(ctx);
  if (c == "eval") return CmdEval(ctx);
  if (c == "ablate") return CmdAblate(ctx);
  return CmdSweep(ctx);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly-supervised audio-visual event localization with label refinement", "avlr"};
  Options opt;
  app.add_option("command", opt.command, "gen | train | refine | retrain | eval | ablate | sweep")
      ->required()
      ->check(CLI::IsMember({"gen", "train", "refine", "retrain", "eval", "ablate", "sweep"}));
  app.add_option("--config", opt.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "root seed");
  app.add_option("--out", opt.out_dir, "artifact directory");
  app.add_option("--threads", opt.threads, "worker cap")->check(CLI::PositiveNumber);
  app.add_option("--tau", opt.tau, "detection threshold in (0, 1)");
  app.add_option("--window", opt.window, "refinement window as N,s");
  app.add_option("--sweep", opt.sweep, "sweep parameter: tau | window");
  app.add_option("--checkpoint", opt.checkpoint, "checkpoint for eval (default: stage3)");
  app.add_flag("--no-aux", opt.no_aux, "train stage 1 without the auxiliary objective");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Logger log(err, LevelFromEnv());
  try {
    Context ctx{BuildConfig(opt), opt, out, log};
    fs::create_directories(ctx.config.out_dir);
    WriteFile(ctx.Artifact(kResolvedConfigFile),
              [&](std::ostream& f) { WriteIni(ctx.config, f); });
    return Dispatch(ctx);
  } catch (const ConfigError& e) {
    err << "avlr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScheduleError& e) {
    err << "avlr: schedule error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "avlr: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const VersionError& e) {
    err << "avlr: version error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "avlr: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace avlr::cli
