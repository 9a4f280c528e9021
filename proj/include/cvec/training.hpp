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

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "cvec/classifier.hpp"
#include "cvec/data.hpp"

namespace cvec {

// Per-class sums of training vectors (the C-vectors). Column i is the
// un-normalised sum of the samples labelled i.
class ClassMeans {
 public:
  ClassMeans(Eigen::MatrixXd columns, std::vector<std::size_t> counts);

  const Eigen::MatrixXd& columns() const { return columns_; }
  std::span<const std::size_t> counts() const { return counts_; }
  int num_classes() const { return static_cast<int>(columns_.cols()); }
  Eigen::Index dim() const { return columns_.rows(); }

  // Columns scaled to unit Euclidean norm.
  Eigen::MatrixXd normalized() const;

 private:
  Eigen::MatrixXd columns_;
  std::vector<std::size_t> counts_;
};

ClassMeans class_mean_vectors(const LabeledSet& set);

// Ascent direction of the log-likelihood, G = C - X P, so one descent step on
// the summed cross-entropy is W + beta * G.
Eigen::MatrixXd gradient(const WeightMatrix& w, const LabeledSet& set);

// The same direction accumulated sample by sample:
// G_i = sum_x (delta_{i,c(x)} - P(i|x)) x.
Eigen::MatrixXd gradient_per_sample(const WeightMatrix& w, const LabeledSet& set);

// Weights drawn i.i.d. uniform in [-0.01, 0.01].
WeightMatrix random_weights(Eigen::Index dim, int num_classes, std::uint64_t seed);

struct ZeroInit {};
struct RandomInit {
  std::uint64_t seed = 0;
};
using GdInit = std::variant<ZeroInit, RandomInit, WeightMatrix>;

struct GdConfig {
  double beta = 0.003;
  int iterations = 400;
  GdInit init = ZeroInit{};

  void validate() const;
};

struct TraceRecord {
  int t = 0;
  std::optional<double> loss;
  std::optional<double> e_marker;
  std::optional<double> accuracy;
};

// One record per iteration including t = 0.
struct TrainTrace {
  std::vector<TraceRecord> records;
};

struct GdResult {
  WeightMatrix weights;
  TrainTrace trace;
};

// Full-batch gradient descent on the summed cross-entropy. When a monitor
// set is given, the trace also carries its E-Marker (against the C-vectors
// of the training set) and, with hidden labels, its accuracy.
GdResult train_gd(const LabeledSet& train, const GdConfig& config,
                  const UnlabeledSet* monitor = nullptr,
                  const HiddenLabels* monitor_labels = nullptr);

// Unit-norm C-vectors used directly as weights.
WeightMatrix weights_from_means(const ClassMeans& means);

// Fixed point of the linearised dynamics: solves (X X' + ridge I) W = C.
WeightMatrix weights_linearized(const LabeledSet& set, double ridge = 0.0);

// X X' of a column-per-sample matrix.
Eigen::MatrixXd gram_matrix(const Eigen::Ref<const Eigen::MatrixXd>& samples);

// One step W + beta (C - G W) of the linearised dynamics.
Eigen::MatrixXd linearized_step(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                                const Eigen::Ref<const Eigen::MatrixXd>& means,
                                const Eigen::Ref<const Eigen::MatrixXd>& w, double beta);

struct LinearizedTrace {
  // distance[t] = ||W_t - W*||_F for t = 0..steps.
  std::vector<double> distance;
  // W_t at the requested checkpoints, in the order requested.
  std::vector<std::pair<int, Eigen::MatrixXd>> snapshots;
  Eigen::MatrixXd fixed_point;
  double lambda_max = 0.0;
};

// Iterates the linearised dynamics from w0 and tracks the distance to
// weights_linearized(set, 0). Throws NumericalError before iterating when
// beta * lambda_max(X X') >= 2.
LinearizedTrace iterate_linearized(const LabeledSet& set, const WeightMatrix& w0, double beta,
                                   int steps, std::span<const int> checkpoints = {});

}  // namespace cvec
