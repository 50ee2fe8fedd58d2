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

// Minimal dense numeric kernel shared by the model and the training loops.
// Everything is 64-bit floating point and row-major.

#ifndef AVLR_NUMKIT_H_
#define AVLR_NUMKIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace avlr {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void Fill(double value);
  bool AllFinite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// An ordered list of parameter (or gradient) tensors.
using ParamSet = std::vector<Matrix>;

ParamSet ZerosLike(const ParamSet& params);
bool SameShapes(const ParamSet& a, const ParamSet& b);
// acc += scale * delta, tensor by tensor.
void AddScaled(ParamSet& acc, const ParamSet& delta, double scale);
bool AllFinite(const ParamSet& params);

// Numerically stable (max-shifted) softmax. Throws std::domain_error on an
// empty input.
std::vector<double> Softmax(std::span<const double> logits);

// Pulls dL/dp back through p = Softmax(z): dz_j = p_j (g_j - sum_k p_k g_k).
std::vector<double> SoftmaxBackward(std::span<const double> probs,
                                    std::span<const double> grad_probs);

struct ColumnMax {
  std::vector<double> values;
  // Row index attaining each column max. Ties go to the lowest row.
  std::vector<std::size_t> argmax;
};

ColumnMax MaxPoolCols(const Matrix& scores);
// Column max restricted to rows [first_row, end_row). Argmax indices are
// absolute row numbers.
ColumnMax MaxPoolCols(const Matrix& scores, std::size_t first_row, std::size_t end_row);

// Row-wise argmax over a raw score row, ties to the lowest column.
std::size_t ArgMax(std::span<const double> values);

inline constexpr double kProbClamp = 1e-7;

// Mean binary cross-entropy over the entries of a probability vector, with
// predictions clamped to [kProbClamp, 1 - kProbClamp].
double BceProbs(std::span<const double> pred, std::span<const double> target);
// dBceProbs/dpred. Entries whose prediction sits outside the clamp range get
// a zero gradient, matching the clamped forward.
std::vector<double> BceProbsGrad(std::span<const double> pred,
                                 std::span<const double> target);

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class OptimizerState {
 public:
  OptimizerState(const ParamSet& shape_like, AdamOptions options = {});

  const AdamOptions& options() const { return options_; }
  std::uint64_t step() const { return step_; }
  const ParamSet& first_moment() const { return m_; }
  const ParamSet& second_moment() const { return v_; }

 private:
  friend void AdamStep(ParamSet& params, const ParamSet& grads, OptimizerState& state);

  AdamOptions options_;
  std::uint64_t step_ = 0;
  ParamSet m_;
  ParamSet v_;
};

// One bias-corrected adaptive-moment update. Throws std::domain_error when
// the shapes of params, grads and the accumulators disagree.
void AdamStep(ParamSet& params, const ParamSet& grads, OptimizerState& state);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t tensor = 0;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates = 0;
  bool passed = true;
};

inline constexpr double kGradCheckStep = 1e-5;

// Compares `analytic` against central differences of `loss` (step 1e-5) at
// every coordinate of `params`. The error per coordinate is
// |analytic - numeric| / max(1, |numeric|). A non-finite loss evaluation
// throws NumericError naming the coordinate.
GradCheckReport GradCheck(const std::function<double(const ParamSet&)>& loss,
                          const ParamSet& params, const ParamSet& analytic,
                          double tolerance);

}  // namespace avlr

#endif  // AVLR_NUMKIT_H_
