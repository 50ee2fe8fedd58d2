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

#include "run_config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "avlr/errors.h"
#include "avlr/textio.h"

namespace avlr::cli {
namespace {

namespace pt = boost::property_tree;

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

double ToDouble(const std::string& v) { return textio::ParseDouble(v, 0); }

int ToInt(const std::string& v) {
  const std::int64_t x = textio::ParseInt(v, 0);
  if (x < -1'000'000'000 || x > 1'000'000'000) throw ParseError("integer out of range", 0);
  return static_cast<int>(x);
}

std::string Str(double v) { return textio::FormatDouble(v); }
std::string Str(int v) { return std::to_string(v); }

std::vector<double> ToDoubleList(const std::string& v) {
  std::vector<double> out;
  for (std::string_view tok : textio::SplitWhitespace(v)) {
    out.push_back(textio::ParseDouble(tok, 0));
  }
  if (out.empty()) throw ParseError("empty list", 0);
  return out;
}

std::vector<std::pair<int, int>> ToWindowList(const std::string& v) {
  std::vector<std::pair<int, int>> out;
  for (std::string_view tok : textio::SplitWhitespace(v)) out.push_back(ParseWindow(std::string(tok)));
  if (out.empty()) throw ParseError("empty list", 0);
  return out;
}

#define AVLR_INT_FIELD(sec, name, member) \
  Field{sec, name, [](RunConfig& c, const std::string& v) { c.member = ToInt(v); }, \
        [](const RunConfig& c) { return Str(c.member); }}
#define AVLR_DOUBLE_FIELD(sec, name, member) \
  Field{sec, name, [](RunConfig& c, const std::string& v) { c.member = ToDouble(v); }, \
        [](const RunConfig& c) { return Str(c.member); }}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Field{"run", "seed",
            [](RunConfig& c, const std::string& v) { c.seed = textio::ParseU64(v, 0); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      Field{"run", "out", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
            [](const RunConfig& c) { return c.out_dir.string(); }},
      AVLR_INT_FIELD("corpus", "train_videos", corpus.num_train_events),
      AVLR_INT_FIELD("corpus", "val_videos", corpus.num_val_events),
      AVLR_INT_FIELD("corpus", "test_videos", corpus.num_test_events),
      AVLR_INT_FIELD("corpus", "background_videos", corpus.num_background),
      AVLR_INT_FIELD("corpus", "segments", corpus.num_segments),
      AVLR_INT_FIELD("corpus", "events", corpus.num_events),
      AVLR_INT_FIELD("corpus", "audio_dim", corpus.audio_dim),
      AVLR_INT_FIELD("corpus", "visual_dim", corpus.visual_dim),
      AVLR_DOUBLE_FIELD("corpus", "noise", corpus.noise_sigma),
      AVLR_DOUBLE_FIELD("corpus", "prototype_scale", corpus.prototype_scale),
      AVLR_INT_FIELD("corpus", "min_event_length", corpus.min_event_length),
      AVLR_DOUBLE_FIELD("corpus", "mismatch_rate", corpus.mismatch_rate),
      AVLR_INT_FIELD("model", "hidden", model.hidden),
      AVLR_INT_FIELD("model", "context_radius", model.context_radius),
      AVLR_INT_FIELD("train", "stage1_epochs", train.stage1_epochs),
      AVLR_INT_FIELD("train", "stage3_epochs", train.stage3_epochs),
      AVLR_DOUBLE_FIELD("train", "learning_rate", train.learning_rate),
      AVLR_INT_FIELD("train", "batch_size", train.batch_size),
      AVLR_DOUBLE_FIELD("train", "tau", train.tau),
      AVLR_INT_FIELD("train", "window_length", train.window_length),
      AVLR_INT_FIELD("train", "stride", train.stride),
      AVLR_DOUBLE_FIELD("train", "aux_weight", train.aux_weight),
      AVLR_DOUBLE_FIELD("train", "lr_weight", train.lr_weight),
      Field{"train", "threads",
            [](RunConfig& c, const std::string& v) {
              const int n = ToInt(v);
              if (n < 1) throw ParseError("threads must be >= 1", 0);
              c.train.threads = static_cast<unsigned>(n);
            },
            [](const RunConfig& c) { return std::to_string(c.train.threads); }},
      Field{"sweep", "parameter",
            [](RunConfig& c, const std::string& v) { c.sweep_parameter = v; },
            [](const RunConfig& c) { return c.sweep_parameter; }},
      Field{"sweep", "taus",
            [](RunConfig& c, const std::string& v) { c.sweep_taus = ToDoubleList(v); },
            [](const RunConfig& c) {
              std::string s;
              for (double t : c.sweep_taus) s += (s.empty() ? "" : " ") + Str(t);
              return s;
            }},
      Field{"sweep", "windows",
            [](RunConfig& c, const std::string& v) { c.sweep_windows = ToWindowList(v); },
            [](const RunConfig& c) {
              std::string s;
              for (auto [n, st] : c.sweep_windows) {
                s += (s.empty() ? "" : " ") + std::to_string(n) + "," + std::to_string(st);
              }
              return s;
            }},
  };
  return fields;
}

#undef AVLR_INT_FIELD
#undef AVLR_DOUBLE_FIELD

const Field* FindField(std::string_view section, std::string_view key) {
  for (const Field& f : Fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace

void RunConfig::Resolve() {
  corpus.seed = seed;
  model.seed = seed;
  train.seed = seed;
  model.audio_dim = corpus.audio_dim;
  model.visual_dim = corpus.visual_dim;
  model.num_events = corpus.num_events;
}

void RunConfig::Validate() const {
  try {
    corpus.Validate();
    model.Validate();
    train.Validate(corpus.num_segments, /*needs_aux=*/false);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (sweep_parameter != "tau" && sweep_parameter != "window") {
    throw ConfigError("sweep parameter must be 'tau' or 'window', got '" + sweep_parameter + "'");
  }
}

void ApplyIni(std::istream& in, RunConfig& config) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' must sit inside a [section]");
    }
    bool known = false;
    for (const Field& f : Fields()) known |= f.section == section;
    if (!known) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const Field* field = FindField(section, key);
      if (field == nullptr) throw ConfigError("config: unknown key [" + section + "] " + key);
      try {
        field->set(config, value.data());
      } catch (const std::exception& e) {
        throw ConfigError("config: bad value for [" + section + "] " + key + ": " + e.what());
      }
    }
  }
}

void ApplyIniFile(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  ApplyIni(in, config);
}

void WriteIni(const RunConfig& config, std::ostream& out) {
  std::string_view current;
  for (const Field& f : Fields()) {
    if (f.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      current = f.section;
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
}

std::pair<int, int> ParseWindow(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("window must be 'N,s', got '" + text + "'", 0);
  return {ToInt(text.substr(0, comma)), ToInt(text.substr(comma + 1))};
}

}  // namespace avlr::cli
