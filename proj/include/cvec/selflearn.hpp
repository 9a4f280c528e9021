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

#include <variant>

#include <Eigen/Core>

#include "cvec/classifier.hpp"
#include "cvec/data.hpp"
#include "cvec/training.hpp"

namespace cvec {

// w_i = C_i / ||C_i||.
struct MinimumDistanceInit {};
// w_i = (Z Z' + ridge I)^-1 (C_i / ||C_i||).
struct LinearizationInit {
  double ridge = 0.0;
};
using PseudoGdInit = std::variant<MinimumDistanceInit, LinearizationInit, RandomInit>;

struct PseudoGdConfig {
  double beta = 0.003;
  int iterations = 200;
  PseudoGdInit init = MinimumDistanceInit{};
  // Divide (Z P) by |S| so it is a posterior-weighted mean rather than a sum.
  bool normalize_zp = false;

  void validate() const;
};

// Label-free update direction: column i is C_i/||C_i|| - (Z P)_i with
// (Z P)_i = sum_z P(i|z) z.
Eigen::MatrixXd pseudo_gradient(const ClassMeans& means, const UnlabeledSet& set,
                                const WeightMatrix& w, bool normalize_zp = false);

WeightMatrix initial_weights(const ClassMeans& means, const UnlabeledSet& set,
                             const PseudoGdInit& init);

struct PseudoGdResult {
  WeightMatrix weights;
  // loss is never populated; accuracy only when eval labels are supplied.
  TrainTrace trace;
};

// Full-batch pseudo-gradient descent on an unlabelled set. The E-Marker of
// every iterate is recorded against the same C-vectors. `eval` is used for
// scoring the trace only and never influences the weights.
PseudoGdResult pseudo_gd(const ClassMeans& means, const UnlabeledSet& set,
                         const PseudoGdConfig& config, const HiddenLabels* eval = nullptr);

}  // namespace cvec
