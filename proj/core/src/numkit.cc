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

#include "avlr/numkit.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "avlr/errors.h"

namespace avlr {

Matrix Matrix::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  Matrix out(n, m);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m) throw std::domain_error("FromRows: ragged rows");
    std::copy(row.begin(), row.end(), out.row(r).begin());
    ++r;
  }
  return out;
}

void Matrix::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

ParamSet ZerosLike(const ParamSet& params) {
  ParamSet out;
  out.reserve(params.size());
  for (const auto& p : params) out.emplace_back(p.rows(), p.cols());
  return out;
}

bool SameShapes(const ParamSet& a, const ParamSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
  }
  return true;
}

void AddScaled(ParamSet& acc, const ParamSet& delta, double scale) {
  if (!SameShapes(acc, delta)) throw std::domain_error("AddScaled: shape mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) {
    auto dst = acc[i].data();
    auto src = delta[i].data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += scale * src[k];
  }
}

bool AllFinite(const ParamSet& params) {
  return std::all_of(params.begin(), params.end(),
                     [](const Matrix& m) { return m.AllFinite(); });
}

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::domain_error("Softmax: empty input");
  const double shift = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - shift);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

std::vector<double> SoftmaxBackward(std::span<const double> probs,
                                    std::span<const double> grad_probs) {
  if (probs.size() != grad_probs.size()) {
    throw std::domain_error("SoftmaxBackward: length mismatch");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) dot += probs[k] * grad_probs[k];
  std::vector<double> out(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) out[j] = probs[j] * (grad_probs[j] - dot);
  return out;
}

ColumnMax MaxPoolCols(const Matrix& scores) { return MaxPoolCols(scores, 0, scores.rows()); }

ColumnMax MaxPoolCols(const Matrix& scores, std::size_t first_row, std::size_t end_row) {
  if (first_row >= end_row || end_row > scores.rows()) {
    throw std::domain_error("MaxPoolCols: empty or out-of-range row window");
  }
  ColumnMax out;
  auto first = scores.row(first_row);
  out.values.assign(first.begin(), first.end());
  out.argmax.assign(scores.cols(), first_row);
  for (std::size_t r = first_row + 1; r < end_row; ++r) {
    auto row = scores.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > out.values[c]) {
        out.values[c] = row[c];
        out.argmax[c] = r;
      }
    }
  }
  return out;
}

std::size_t ArgMax(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("ArgMax: empty input");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

namespace {

void CheckSameLength(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw std::domain_error("BceProbs: prediction/target length mismatch (" +
                            std::to_string(pred.size()) + " vs " +
                            std::to_string(target.size()) + ")");
  }
}

}  // namespace

double BceProbs(std::span<const double> pred, std::span<const double> target) {
  CheckSameLength(pred, target);
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kProbClamp, 1.0 - kProbClamp);
    total -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return total / static_cast<double>(pred.size());
}

std::vector<double> BceProbsGrad(std::span<const double> pred,
                                 std::span<const double> target) {
  CheckSameLength(pred, target);
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  std::vector<double> out(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred[i];
    if (p < kProbClamp || p > 1.0 - kProbClamp) continue;
    out[i] = inv_n * (-target[i] / p + (1.0 - target[i]) / (1.0 - p));
  }
  return out;
}

OptimizerState::OptimizerState(const ParamSet& shape_like, AdamOptions options)
    : options_(options), m_(ZerosLike(shape_like)), v_(ZerosLike(shape_like)) {}

void AdamStep(ParamSet& params, const ParamSet& grads, OptimizerState& state) {
  if (!SameShapes(params, grads) || !SameShapes(params, state.m_)) {
    throw std::domain_error("AdamStep: parameter/gradient/state shape mismatch");
  }
  const AdamOptions& o = state.options_;
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correct1 = 1.0 - std::pow(o.beta1, t);
  const double correct2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].data();
    auto g = grads[i].data();
    auto m = state.m_[i].data();
    auto v = state.v_[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correct1;
      const double v_hat = v[k] / correct2;
      p[k] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

GradCheckReport GradCheck(const std::function<double(const ParamSet&)>& loss,
                          const ParamSet& params, const ParamSet& analytic,
                          double tolerance) {
  if (!SameShapes(params, analytic)) {
    throw std::domain_error("GradCheck: analytic gradient shape mismatch");
  }
  GradCheckReport report;
  ParamSet probe = params;
  for (std::size_t t = 0; t < probe.size(); ++t) {
    auto values = probe[t].data();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + kGradCheckStep;
      const double up = loss(probe);
      values[k] = saved - kGradCheckStep;
      const double down = loss(probe);
      values[k] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericError("GradCheck: non-finite loss at tensor " + std::to_string(t) +
                           ", index " + std::to_string(k));
      }
      const double numeric = (up - down) / (2.0 * kGradCheckStep);
      const double exact = analytic[t].data()[k];
      const double err = std::abs(exact - numeric) / std::max(1.0, std::abs(numeric));
      ++report.coordinates;
      if (err > report.max_rel_error || report.coordinates == 1) {
        report.max_rel_error = err;
        report.tensor = t;
        report.index = k;
        report.analytic = exact;
        report.numeric = numeric;
      }
    }
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace avlr
