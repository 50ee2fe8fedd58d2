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

#include "avlr/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "avlr/errors.h"
#include "avlr/textio.h"

namespace avlr {
namespace {

constexpr std::string_view kCheckpointMagic = "avlr-checkpoint";
constexpr int kCheckpointVersion = 1;
constexpr const char* kTensorNames[] = {"w1", "b1", "w2", "b2"};

ParamSet ShapesFor(const ModelConfig& c) {
  const auto in = static_cast<std::size_t>(c.input_dim());
  const auto h = static_cast<std::size_t>(c.hidden);
  const auto k = static_cast<std::size_t>(c.num_classes());
  return {Matrix(in, h), Matrix(1, h), Matrix(h, k), Matrix(1, k)};
}

}  // namespace

void ModelConfig::Validate() const {
  if (audio_dim < 1 || visual_dim < 1) throw std::domain_error("ModelConfig: feature dims must be positive");
  if (hidden < 1) throw std::domain_error("ModelConfig: hidden width must be >= 1");
  if (num_events < 2) throw std::domain_error("ModelConfig: need at least 2 event classes");
  if (context_radius < 0) throw std::domain_error("ModelConfig: context radius must be >= 0");
}

ModelParams ModelParams::Zeros(const ModelConfig& config) {
  config.Validate();
  ModelParams p;
  p.config_ = config;
  p.tensors_ = ShapesFor(config);
  return p;
}

ModelParams ModelParams::Random(const ModelConfig& config, Rng& rng) {
  ModelParams p = Zeros(config);
  const double w1_scale = std::sqrt(2.0 / config.input_dim());
  const double w2_scale = std::sqrt(1.0 / config.hidden);
  for (double& x : p.tensors_[kW1].data()) x = w1_scale * rng.Normal();
  for (double& x : p.tensors_[kW2].data()) x = w2_scale * rng.Normal();
  return p;
}

ModelParams ModelParams::FromTensors(const ModelConfig& config, ParamSet tensors) {
  ModelParams p = Zeros(config);
  if (!SameShapes(p.tensors_, tensors)) {
    throw std::domain_error("ModelParams: tensor shapes do not match the config");
  }
  p.tensors_ = std::move(tensors);
  return p;
}

ForwardCache ForwardPass(const ModelParams& params, const Matrix& audio, const Matrix& visual) {
  const ModelConfig& cfg = params.config();
  if (audio.cols() != static_cast<std::size_t>(cfg.audio_dim) ||
      visual.cols() != static_cast<std::size_t>(cfg.visual_dim) || audio.rows() != visual.rows() ||
      audio.rows() == 0) {
    throw std::domain_error("ForwardPass: feature dims do not match the model config");
  }
  const std::size_t t_count = audio.rows();
  const std::size_t da = audio.cols();
  const std::size_t dv = visual.cols();
  const std::size_t block = da + dv;
  const std::size_t in = static_cast<std::size_t>(cfg.input_dim());
  const std::size_t h = static_cast<std::size_t>(cfg.hidden);
  const std::size_t k_count = static_cast<std::size_t>(cfg.num_classes());
  const int r = cfg.context_radius;

  ForwardCache cache{Matrix(t_count, in), Matrix(t_count, h), Matrix(t_count, h),
                     Matrix(t_count, k_count)};
  for (std::size_t t = 0; t < t_count; ++t) {
    auto row = cache.inputs.row(t);
    for (int off = -r; off <= r; ++off) {
      const long src = static_cast<long>(t) + off;
      if (src < 0 || src >= static_cast<long>(t_count)) continue;
      const std::size_t base = static_cast<std::size_t>(off + r) * block;
      auto a = audio.row(static_cast<std::size_t>(src));
      auto v = visual.row(static_cast<std::size_t>(src));
      std::copy(a.begin(), a.end(), row.begin() + static_cast<long>(base));
      std::copy(v.begin(), v.end(), row.begin() + static_cast<long>(base + da));
    }
  }

  const Matrix& w1 = params.w1();
  const Matrix& w2 = params.w2();
  for (std::size_t t = 0; t < t_count; ++t) {
    auto pre = cache.pre.row(t);
    auto b1 = params.b1().row(0);
    std::copy(b1.begin(), b1.end(), pre.begin());
    auto x = cache.inputs.row(t);
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      auto w = w1.row(i);
      for (std::size_t j = 0; j < h; ++j) pre[j] += xi * w[j];
    }
    auto hid = cache.hidden.row(t);
    for (std::size_t j = 0; j < h; ++j) hid[j] = pre[j] > 0.0 ? pre[j] : 0.0;

    auto s = cache.scores.row(t);
    auto b2 = params.b2().row(0);
    std::copy(b2.begin(), b2.end(), s.begin());
    for (std::size_t j = 0; j < h; ++j) {
      const double hj = hid[j];
      if (hj == 0.0) continue;
      auto w = w2.row(j);
      for (std::size_t k = 0; k < k_count; ++k) s[k] += hj * w[k];
    }
  }
  return cache;
}

Matrix ForwardScores(const ModelParams& params, const FeatureVideo& video) {
  return ForwardPass(params, video.audio, video.visual).scores;
}

void BackwardPass(const ModelParams& params, const ForwardCache& cache,
                  const Matrix& grad_scores, ParamSet& grads) {
  if (grad_scores.rows() != cache.scores.rows() || grad_scores.cols() != cache.scores.cols()) {
    throw std::domain_error("BackwardPass: score gradient shape mismatch");
  }
  if (!SameShapes(grads, params.tensors())) {
    throw std::domain_error("BackwardPass: gradient buffer shape mismatch");
  }
  const std::size_t in = cache.inputs.cols();
  const std::size_t h = cache.hidden.cols();
  const std::size_t k_count = cache.scores.cols();
  const Matrix& w2 = params.w2();
  Matrix& g_w1 = grads[ModelParams::kW1];
  Matrix& g_b1 = grads[ModelParams::kB1];
  Matrix& g_w2 = grads[ModelParams::kW2];
  Matrix& g_b2 = grads[ModelParams::kB2];
  std::vector<double> d_pre(h);

  for (std::size_t t = 0; t < cache.scores.rows(); ++t) {
    auto ds = grad_scores.row(t);
    if (std::all_of(ds.begin(), ds.end(), [](double x) { return x == 0.0; })) continue;

    auto gb2 = g_b2.row(0);
    for (std::size_t k = 0; k < k_count; ++k) gb2[k] += ds[k];
    auto hid = cache.hidden.row(t);
    auto pre = cache.pre.row(t);
    for (std::size_t j = 0; j < h; ++j) {
      auto gw = g_w2.row(j);
      auto w = w2.row(j);
      double back = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        gw[k] += hid[j] * ds[k];
        back += w[k] * ds[k];
      }
      d_pre[j] = pre[j] > 0.0 ? back : 0.0;
    }
    auto gb1 = g_b1.row(0);
    for (std::size_t j = 0; j < h; ++j) gb1[j] += d_pre[j];
    auto x = cache.inputs.row(t);
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      auto gw = g_w1.row(i);
      for (std::size_t j = 0; j < h; ++j) gw[j] += xi * d_pre[j];
    }
  }
}

namespace {

void CheckWindow(const Matrix& scores, Window window) {
  if (window.first < 1 || window.last < window.first ||
      window.last > static_cast<int>(scores.rows())) {
    throw std::domain_error("window [" + std::to_string(window.first) + ", " +
                            std::to_string(window.last) + "] is empty or outside 1.." +
                            std::to_string(scores.rows()));
  }
}

}  // namespace

std::vector<double> VideoPrediction(const Matrix& scores, Window window) {
  CheckWindow(scores, window);
  const ColumnMax pooled = MaxPoolCols(scores, static_cast<std::size_t>(window.first - 1),
                                       static_cast<std::size_t>(window.last));
  return Softmax(pooled.values);
}

double BagLoss(const Matrix& scores, Window window, std::span<const double> target,
               Matrix* grad_scores, double weight) {
  CheckWindow(scores, window);
  const ColumnMax pooled = MaxPoolCols(scores, static_cast<std::size_t>(window.first - 1),
                                       static_cast<std::size_t>(window.last));
  const std::vector<double> probs = Softmax(pooled.values);
  const double loss = BceProbs(probs, target);
  if (grad_scores != nullptr) {
    const std::vector<double> d_probs = BceProbsGrad(probs, target);
    const std::vector<double> d_logits = SoftmaxBackward(probs, d_probs);
    for (std::size_t c = 0; c < d_logits.size(); ++c) {
      (*grad_scores)(pooled.argmax[c], c) += weight * d_logits[c];
    }
  }
  return loss;
}

LossAndGrad MilLoss(const ModelParams& params, const FeatureVideo& video) {
  const ForwardCache cache = ForwardPass(params, video.audio, video.visual);
  Matrix d_scores(cache.scores.rows(), cache.scores.cols());
  const std::vector<double> target = video.video_label.AsTarget();
  LossAndGrad out;
  out.loss = BagLoss(cache.scores, Window{1, video.num_segments()}, target, &d_scores);
  out.grads = ZerosLike(params.tensors());
  BackwardPass(params, cache, d_scores, out.grads);
  return out;
}

std::vector<ClassId> PredictFromScores(const Matrix& scores) {
  std::vector<ClassId> out(scores.rows());
  for (std::size_t t = 0; t < scores.rows(); ++t) {
    out[t] = static_cast<ClassId>(ArgMax(scores.row(t))) + 1;
  }
  return out;
}

std::vector<ClassId> PredictSegments(const ModelParams& params, const FeatureVideo& video) {
  return PredictFromScores(ForwardScores(params, video));
}

void SaveCheckpoint(const ModelParams& params, std::ostream& out) {
  const ModelConfig& c = params.config();
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "config d_a=" << c.audio_dim << " d_v=" << c.visual_dim << " hidden=" << c.hidden
      << " C=" << c.num_events << " radius=" << c.context_radius << " seed=" << c.seed << '\n';
  for (std::size_t i = 0; i < ModelParams::kNumTensors; ++i) {
    const Matrix& m = params.tensors()[i];
    out << "tensor " << kTensorNames[i] << ' ' << m.rows() << ' ' << m.cols();
    for (double x : m.data()) out << ' ' << textio::FormatDouble(x);
    out << '\n';
  }
  out << "end\n";
}

void SaveCheckpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  SaveCheckpoint(params, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

ModelParams LoadCheckpoint(std::istream& in) {
  textio::LineReader reader(in);
  textio::ExpectHeader(reader, kCheckpointMagic, kCheckpointVersion);
  std::string line;
  if (!reader.Next(line)) throw ParseError("truncated checkpoint: missing config", 0);
  auto tokens = textio::SplitWhitespace(line);
  std::size_t ln = reader.line_number();
  if (tokens.size() != 7 || tokens[0] != "config") throw ParseError("expected config record", ln);
  auto as_int = [&](std::string_view tok, std::string_view key) {
    return static_cast<int>(textio::ParseInt(textio::ExpectKeyValue(tok, key, ln), ln));
  };
  ModelConfig cfg;
  cfg.audio_dim = as_int(tokens[1], "d_a");
  cfg.visual_dim = as_int(tokens[2], "d_v");
  cfg.hidden = as_int(tokens[3], "hidden");
  cfg.num_events = as_int(tokens[4], "C");
  cfg.context_radius = as_int(tokens[5], "radius");
  cfg.seed = textio::ParseU64(textio::ExpectKeyValue(tokens[6], "seed", ln), ln);
  try {
    cfg.Validate();
  } catch (const std::domain_error& e) {
    throw ParseError(e.what(), ln);
  }
  ParamSet tensors = ShapesFor(cfg);
  for (std::size_t i = 0; i < ModelParams::kNumTensors; ++i) {
    if (!reader.Next(line)) throw ParseError("truncated checkpoint: missing tensor", 0);
    ln = reader.line_number();
    tokens = textio::SplitWhitespace(line);
    Matrix& m = tensors[i];
    if (tokens.size() != 4 + m.size() || tokens[0] != "tensor" || tokens[1] != kTensorNames[i]) {
      throw ParseError(std::string("malformed tensor record, expected '") + kTensorNames[i] + "'",
                       ln);
    }
    if (textio::ParseU64(tokens[2], ln) != m.rows() || textio::ParseU64(tokens[3], ln) != m.cols()) {
      throw ParseError("tensor shape does not match config", ln);
    }
    auto values = m.data();
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = textio::ParseDouble(tokens[4 + k], ln);
  }
  if (!reader.Next(line) || textio::SplitWhitespace(line) != std::vector<std::string_view>{"end"}) {
    throw ParseError("truncated checkpoint: missing 'end' record", 0);
  }
  return ModelParams::FromTensors(cfg, std::move(tensors));
}

ModelParams LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path.string() + "'");
  return LoadCheckpoint(in);
}

}  // namespace avlr
