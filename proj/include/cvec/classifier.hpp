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

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "cvec/data.hpp"

namespace cvec {

// Weights of a one-layer softmax classifier: an n x K matrix whose column i
// is the weight vector of class i. There is no bias term.
class WeightMatrix {
 public:
  explicit WeightMatrix(Eigen::MatrixXd weights);

  static WeightMatrix zeros(Eigen::Index dim, int num_classes);

  const Eigen::MatrixXd& matrix() const { return weights_; }
  Eigen::Index dim() const { return weights_.rows(); }
  int num_classes() const { return static_cast<int>(weights_.cols()); }
  auto column(int i) const { return weights_.col(i); }

 private:
  Eigen::MatrixXd weights_;
};

// Index of the largest entry; ties go to the lowest index.
int argmax(const Eigen::Ref<const Eigen::VectorXd>& values);

// Softmax of w_i . x, evaluated after subtracting the largest logit.
Eigen::VectorXd posterior(const WeightMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x);

// Posterior matrix P for a column-per-sample batch: row s is the posterior of
// sample s, so P is N x K.
Eigen::MatrixXd posteriors(const WeightMatrix& w, const Eigen::Ref<const Eigen::MatrixXd>& samples);

int predict(const WeightMatrix& w, const Eigen::Ref<const Eigen::VectorXd>& x);
std::vector<int> predict_all(const WeightMatrix& w,
                             const Eigen::Ref<const Eigen::MatrixXd>& samples);

// Sum over the set of -ln P(label | x).
double cross_entropy(const WeightMatrix& w, const LabeledSet& set);

// Fraction of samples whose prediction equals the label. Throws on an empty set.
double accuracy(const WeightMatrix& w, const LabeledSet& set);

}  // namespace cvec
