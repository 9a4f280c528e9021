// Copyright 2026 The cvec Authors
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

#include "cvec/classifier.hpp"

#include <cmath>
#include <string>

#include "cvec/error.hpp"

namespace cvec {

namespace {

void check_dim(const WeightMatrix& w, Eigen::Index dim) {
  if (dim != w.dim()) {
    throw InvalidArgument("dimension mismatch: weights have n = " + std::to_string(w.dim()) +
                          ", input has n = " + std::to_string(dim));
  }
}

// Softmax of a logit row in place.
template <typename Row>
void softmax_row(Row&& logits) {
  const double top = logits.maxCoeff();
  logits = (logits.array() - top).exp();
  logits /= logits.sum();
}

}  // namespace

WeightMatrix::WeightMatrix(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() < 1) throw InvalidArgument("weight matrix needs n >= 1");
  if (weights_.cols() < 2) throw InvalidArgument("weight matrix needs K >= 2");
  if (!weights_.allFinite()) throw NumericalError("weight matrix has non-finite entries");
}

WeightMatrix WeightMatrix::zeros(Eigen::Index dim, int num_classes) {
  return WeightMatrix(Eigen::MatrixXd::Zero(dim, num_classes));
}

int argmax(const Eigen::Ref<const Eigen::VectorXd>& values) {
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = static_cast<int>(i);
  }
  return best;
}

Eigen::VectorXd posterior(const WeightMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(w, x.size());
  Eigen::RowVectorXd row = (w.matrix().transpose() * x).transpose();
  softmax_row(row);
  return row.transpose();
}

Eigen::MatrixXd posteriors(const WeightMatrix& w,
                           const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  check_dim(w, samples.rows());
  Eigen::MatrixXd p = samples.transpose() * w.matrix();
  for (Eigen::Index s = 0; s < p.rows(); ++s) softmax_row(p.row(s));
  return p;
}

int predict(const WeightMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(w, x.size());
  // Softmax is monotone, so the argmax of the logits is the argmax of P.
  const Eigen::VectorXd logits = w.matrix().transpose() * x;
  return argmax(logits);
}

std::vector<int> predict_all(const WeightMatrix& w,
                             const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  check_dim(w, samples.rows());
  const Eigen::MatrixXd logits = w.matrix().transpose() * samples;
  std::vector<int> out(static_cast<std::size_t>(samples.cols()));
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    out[static_cast<std::size_t>(s)] = argmax(logits.col(s));
  }
  return out;
}

double cross_entropy(const WeightMatrix& w, const LabeledSet& set) {
  check_dim(w, set.dim());
  if (set.num_classes() != w.num_classes()) {
    throw InvalidArgument("cross_entropy: set has " + std::to_string(set.num_classes()) +
                          " classes, weights have " + std::to_string(w.num_classes()));
  }
  const Eigen::MatrixXd logits = w.matrix().transpose() * set.features();
  double total = 0.0;
  for (Eigen::Index s = 0; s < logits.cols(); ++s) {
    const auto col = logits.col(s);
    const double top = col.maxCoeff();
    const double lse = top + std::log((col.array() - top).exp().sum());
    total += lse - col(set.labels()[static_cast<std::size_t>(s)]);
  }
  return total;
}

double accuracy(const WeightMatrix& w, const LabeledSet& set) {
  if (set.size() == 0) throw InvalidArgument("accuracy of an empty set is undefined");
  const auto predicted = predict_all(w, set.features());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == set.labels()[i];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace cvec
