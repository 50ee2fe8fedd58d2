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

// Corpus text format, version 1. One record per line:
//
//   avlr-corpus 1
//   spec T=<T> C=<C> d_a=<da> d_v=<dv> train=<n> val=<n> test=<n> background=<n>
//        noise=<sigma> scale=<s> min_event=<L> mismatch=<rate> seed=<u64>
//   proto audio <class> <d_a floats>        (classes 1..C+1, in order)
//   proto visual <class> <d_v floats>       (classes 1..C+1, in order)
//   video <id> <train|val|test> y <T ints> Y <C+1 bits> a <T*d_a floats> v <T*d_v floats>
//   end <video count>
//
// (the spec record is a single line). Feature matrices are row-major.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "avlr/datagen.h"
#include "avlr/errors.h"
#include "avlr/textio.h"

namespace avlr {
namespace {

constexpr std::string_view kMagic = "avlr-corpus";
constexpr int kVersion = 1;

using textio::FormatDouble;

const char* SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

void WriteMatrixValues(std::ostream& out, const Matrix& m) {
  for (double x : m.data()) out << ' ' << FormatDouble(x);
}

class RecordCursor {
 public:
  RecordCursor(std::vector<std::string_view> tokens, std::size_t line)
      : tokens_(std::move(tokens)), line_(line) {}

  std::string_view Next(std::string_view what) {
    if (pos_ >= tokens_.size()) {
      throw ParseError("record ends early, expected " + std::string(what), line_);
    }
    return tokens_[pos_++];
  }
  void Expect(std::string_view literal) {
    auto tok = Next(literal);
    if (tok != literal) {
      throw ParseError("expected '" + std::string(literal) + "', got '" + std::string(tok) + "'",
                       line_);
    }
  }
  double Double(std::string_view what) { return textio::ParseDouble(Next(what), line_); }
  std::int64_t Int(std::string_view what) { return textio::ParseInt(Next(what), line_); }
  void ExpectEnd() const {
    if (pos_ != tokens_.size()) throw ParseError("trailing tokens in record", line_);
  }
  std::size_t line() const { return line_; }

 private:
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

int AsInt(std::string_view token, std::size_t line) {
  return static_cast<int>(textio::ParseInt(token, line));
}

CorpusSpec ParseSpec(const std::string& text, std::size_t line) {
  auto tokens = textio::SplitWhitespace(text);
  if (tokens.size() != 14 || tokens[0] != "spec") {
    throw ParseError("expected 'spec' record with 13 fields", line);
  }
  using textio::ExpectKeyValue;
  CorpusSpec s;
  s.num_segments = AsInt(ExpectKeyValue(tokens[1], "T", line), line);
  s.num_events = AsInt(ExpectKeyValue(tokens[2], "C", line), line);
  s.audio_dim = AsInt(ExpectKeyValue(tokens[3], "d_a", line), line);
  s.visual_dim = AsInt(ExpectKeyValue(tokens[4], "d_v", line), line);
  s.num_train_events = AsInt(ExpectKeyValue(tokens[5], "train", line), line);
  s.num_val_events = AsInt(ExpectKeyValue(tokens[6], "val", line), line);
  s.num_test_events = AsInt(ExpectKeyValue(tokens[7], "test", line), line);
  s.num_background = AsInt(ExpectKeyValue(tokens[8], "background", line), line);
  s.noise_sigma = textio::ParseDouble(ExpectKeyValue(tokens[9], "noise", line), line);
  s.prototype_scale = textio::ParseDouble(ExpectKeyValue(tokens[10], "scale", line), line);
  s.min_event_length = AsInt(ExpectKeyValue(tokens[11], "min_event", line), line);
  s.mismatch_rate = textio::ParseDouble(ExpectKeyValue(tokens[12], "mismatch", line), line);
  s.seed = textio::ParseU64(ExpectKeyValue(tokens[13], "seed", line), line);
  try {
    s.Validate();
  } catch (const std::domain_error& e) {
    throw ParseError(e.what(), line);
  }
  return s;
}

void ReadInto(RecordCursor& cur, Matrix& m) {
  for (double& x : m.data()) x = cur.Double("feature value");
}

}  // namespace

void SaveCorpus(const Corpus& corpus, std::ostream& out) {
  const CorpusSpec& s = corpus.spec;
  out << kMagic << ' ' << kVersion << '\n';
  out << "spec T=" << s.num_segments << " C=" << s.num_events << " d_a=" << s.audio_dim
      << " d_v=" << s.visual_dim << " train=" << s.num_train_events
      << " val=" << s.num_val_events << " test=" << s.num_test_events
      << " background=" << s.num_background << " noise=" << FormatDouble(s.noise_sigma)
      << " scale=" << FormatDouble(s.prototype_scale) << " min_event=" << s.min_event_length
      << " mismatch=" << FormatDouble(s.mismatch_rate) << " seed=" << s.seed << '\n';
  auto write_protos = [&](const char* name, const Matrix& protos) {
    for (std::size_t r = 0; r < protos.rows(); ++r) {
      out << "proto " << name << ' ' << (r + 1);
      for (double x : protos.row(r)) out << ' ' << FormatDouble(x);
      out << '\n';
    }
  };
  write_protos("audio", corpus.audio_prototypes);
  write_protos("visual", corpus.visual_prototypes);
  std::size_t count = 0;
  for (Split split : {Split::kTrain, Split::kVal, Split::kTest}) {
    for (const FeatureVideo& v : corpus.split(split)) {
      out << "video " << v.id << ' ' << SplitName(split) << " y";
      for (ClassId c : v.segment_labels) out << ' ' << c;
      out << " Y";
      for (auto bit : v.video_label.bits()) out << ' ' << static_cast<int>(bit);
      out << " a";
      WriteMatrixValues(out, v.audio);
      out << " v";
      WriteMatrixValues(out, v.visual);
      out << '\n';
      ++count;
    }
  }
  out << "end " << count << '\n';
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  SaveCorpus(corpus, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Corpus LoadCorpus(std::istream& in) {
  textio::LineReader reader(in);
  textio::ExpectHeader(reader, kMagic, kVersion);
  std::string line;
  if (!reader.Next(line)) throw ParseError("truncated corpus: missing spec record", 0);
  Corpus corpus;
  corpus.spec = ParseSpec(line, reader.line_number());
  const CorpusSpec& s = corpus.spec;
  const std::size_t classes = static_cast<std::size_t>(s.num_events) + 1;
  corpus.audio_prototypes = Matrix(classes, static_cast<std::size_t>(s.audio_dim));
  corpus.visual_prototypes = Matrix(classes, static_cast<std::size_t>(s.visual_dim));

  for (auto* protos : {&corpus.audio_prototypes, &corpus.visual_prototypes}) {
    const std::string_view name = protos == &corpus.audio_prototypes ? "audio" : "visual";
    for (std::size_t r = 0; r < classes; ++r) {
      if (!reader.Next(line)) throw ParseError("truncated corpus: missing prototype record", 0);
      RecordCursor cur(textio::SplitWhitespace(line), reader.line_number());
      cur.Expect("proto");
      cur.Expect(name);
      if (cur.Int("class id") != static_cast<std::int64_t>(r + 1)) {
        throw ParseError("prototype records out of order", cur.line());
      }
      for (double& x : protos->row(r)) x = cur.Double("prototype value");
      cur.ExpectEnd();
    }
  }

  std::size_t count = 0;
  bool saw_end = false;
  while (reader.Next(line)) {
    RecordCursor cur(textio::SplitWhitespace(line), reader.line_number());
    const auto kind = cur.Next("record kind");
    if (kind == "end") {
      if (static_cast<std::size_t>(cur.Int("video count")) != count) {
        throw ParseError("video count in 'end' record does not match records read", cur.line());
      }
      cur.ExpectEnd();
      saw_end = true;
      break;
    }
    if (kind != "video") {
      throw ParseError("unknown record kind '" + std::string(kind) + "'", cur.line());
    }
    FeatureVideo v;
    v.id = std::string(cur.Next("video id"));
    const auto split = cur.Next("split");
    std::vector<FeatureVideo>* dst = nullptr;
    if (split == "train") {
      dst = &corpus.train;
    } else if (split == "val") {
      dst = &corpus.val;
    } else if (split == "test") {
      dst = &corpus.test;
    } else {
      throw ParseError("unknown split '" + std::string(split) + "'", cur.line());
    }
    cur.Expect("y");
    v.segment_labels.resize(static_cast<std::size_t>(s.num_segments));
    for (ClassId& c : v.segment_labels) {
      c = static_cast<ClassId>(cur.Int("segment label"));
      if (c < 1 || c > s.num_events + 1) throw ParseError("segment label out of range", cur.line());
    }
    cur.Expect("Y");
    std::vector<std::uint8_t> bits(classes);
    for (auto& b : bits) {
      const auto value = cur.Int("label bit");
      if (value != 0 && value != 1) throw ParseError("label bit must be 0 or 1", cur.line());
      b = static_cast<std::uint8_t>(value);
    }
    v.video_label = VideoLabelFromSegments(v.segment_labels, s.num_events);
    if (v.video_label.bits() != bits) {
      throw ParseError("video label Y disagrees with segment labels y", cur.line());
    }
    cur.Expect("a");
    v.audio = Matrix(static_cast<std::size_t>(s.num_segments), static_cast<std::size_t>(s.audio_dim));
    ReadInto(cur, v.audio);
    cur.Expect("v");
    v.visual =
        Matrix(static_cast<std::size_t>(s.num_segments), static_cast<std::size_t>(s.visual_dim));
    ReadInto(cur, v.visual);
    cur.ExpectEnd();
    dst->push_back(std::move(v));
    ++count;
  }
  if (!saw_end) throw ParseError("truncated corpus: missing 'end' record", 0);
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus '" + path.string() + "'");
  return LoadCorpus(in);
}

}  // namespace avlr
