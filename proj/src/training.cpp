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

#include "cvec/training.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "cvec/error.hpp"
#include "cvec/linalg.hpp"
#include "cvec/monitor.hpp"
#include "cvec/rng.hpp"

namespace cvec {

ClassMeans::ClassMeans(Eigen::MatrixXd columns, std::vector<std::size_t> counts)
    : columns_(std::move(columns)), counts_(std::move(counts)) {
  if (static_cast<std::size_t>(columns_.cols()) != counts_.size()) {
    throw InvalidArgument("class means: column and count sizes differ");
  }
  for (Eigen::Index k = 0; k < columns_.cols(); ++k) {
    if (!(columns_.col(k).norm() > 0.0)) {
      throw DataError("C-vector of class " + std::to_string(k) + " has zero norm");
    }
  }
}

Eigen::MatrixXd ClassMeans::normalized() const {
  return columns_.colwise().normalized();
}

ClassMeans class_mean_vectors(const LabeledSet& set) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(set.dim(), set.num_classes());
  for (Eigen::Index s = 0; s < set.size(); ++s) {
    sums.col(set.labels()[static_cast<std::size_t>(s)]) += set.sample(s);
  }
  auto counts = set.class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) throw DataError("class " + std::to_string(k) + " has no samples");
  }
  return ClassMeans(std::move(sums), std::move(counts));
}

namespace {

void check_compatible(const WeightMatrix& w, const LabeledSet& set) {
  if (w.dim() != set.dim() || w.num_classes() != set.num_classes()) {
    std::ostringstream msg;
    msg << "dimension mismatch: weights are " << w.dim() << " x " << w.num_classes()
        << ", set has n = " << set.dim() << " and K = " << set.num_classes();
    throw InvalidArgument(msg.str());
  }
}

Eigen::MatrixXd ascent_direction(const WeightMatrix& w, const LabeledSet& set,
                                 const Eigen::MatrixXd& means) {
  return means - set.features() * posteriors(w, set.features());
}

}  // namespace

Eigen::MatrixXd gradient(const WeightMatrix& w, const LabeledSet& set) {
  check_compatible(w, set);
  return ascent_direction(w, set, class_mean_vectors(set).columns());
}

Eigen::MatrixXd gradient_per_sample(const WeightMatrix& w, const LabeledSet& set) {
  check_compatible(w, set);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(w.dim(), w.num_classes());
  for (Eigen::Index s = 0; s < set.size(); ++s) {
    const auto x = set.sample(s);
    const Eigen::VectorXd p = posterior(w, x);
    const int label = set.labels()[static_cast<std::size_t>(s)];
    for (int i = 0; i < w.num_classes(); ++i) {
      const double coeff = (i == label ? 1.0 : 0.0) - p(i);
      g.col(i) += coeff * x;
    }
  }
  return g;
}

WeightMatrix random_weights(Eigen::Index dim, int num_classes, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd w(dim, num_classes);
  // Column-major fill order keeps the draw sequence independent of layout.
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    for (Eigen::Index d = 0; d < w.rows(); ++d) w(d, k) = rng.uniform(-0.01, 0.01);
  }
  return WeightMatrix(std::move(w));
}

void GdConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be > 0");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
}

GdResult train_gd(const LabeledSet& train, const GdConfig& config, const UnlabeledSet* monitor,
                  const HiddenLabels* monitor_labels) {
  config.validate();
  if (monitor_labels != nullptr && monitor == nullptr) {
    throw InvalidArgument("train_gd: hidden labels given without a monitor set");
  }
  if (monitor != nullptr && monitor->dim() != train.dim()) {
    throw InvalidArgument("train_gd: monitor set dimension differs from training set");
  }

  WeightMatrix w = std::visit(
      [&](const auto& init) -> WeightMatrix {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, ZeroInit>) {
          return WeightMatrix::zeros(train.dim(), train.num_classes());
        } else if constexpr (std::is_same_v<T, RandomInit>) {
          return random_weights(train.dim(), train.num_classes(), init.seed);
        } else {
          return init;
        }
      },
      config.init);
  check_compatible(w, train);

  const ClassMeans means = class_mean_vectors(train);
  GdResult result{w, {}};
  result.trace.records.reserve(static_cast<std::size_t>(config.iterations) + 1);

  auto record = [&](int t, const WeightMatrix& current) {
    TraceRecord rec;
    rec.t = t;
    rec.loss = cross_entropy(current, train);
    if (!std::isfinite(*rec.loss)) {
      throw NumericalError("gradient descent diverged at iteration " + std::to_string(t) +
                           ": loss is not finite");
    }
    if (monitor != nullptr) {
      rec.e_marker = e_marker(means, class_response_sums(current, *monitor)).e_marker;
      if (monitor_labels != nullptr) {
        rec.accuracy = monitor_labels->accuracy(predict_all(current, monitor->features()));
      }
    }
    result.trace.records.push_back(rec);
  };

  record(0, w);
  Eigen::MatrixXd current = w.matrix();
  for (int t = 1; t <= config.iterations; ++t) {
    current += config.beta * ascent_direction(WeightMatrix(current), train, means.columns());
    if (!current.allFinite()) {
      throw NumericalError("gradient descent diverged at iteration " + std::to_string(t) +
                           ": weights are not finite");
    }
    record(t, WeightMatrix(current));
  }
  result.weights = WeightMatrix(std::move(current));
  return result;
}

WeightMatrix weights_from_means(const ClassMeans& means) {
  return WeightMatrix(means.normalized());
}

Eigen::MatrixXd gram_matrix(const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(samples.rows(), samples.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(samples);
  return gram.selfadjointView<Eigen::Lower>();
}

WeightMatrix weights_linearized(const LabeledSet& set, double ridge) {
  const ClassMeans means = class_mean_vectors(set);
  return WeightMatrix(solve_gram(gram_matrix(set.features()), means.columns(), ridge));
}

Eigen::MatrixXd linearized_step(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                                const Eigen::Ref<const Eigen::MatrixXd>& means,
                                const Eigen::Ref<const Eigen::MatrixXd>& w, double beta) {
  return w + beta * (means - gram * w);
}

LinearizedTrace iterate_linearized(const LabeledSet& set, const WeightMatrix& w0, double beta,
                                   int steps, std::span<const int> checkpoints) {
  check_compatible(w0, set);
  if (!(beta > 0.0)) throw InvalidArgument("beta must be > 0");
  if (steps < 0) throw InvalidArgument("steps must be >= 0");

  const Eigen::MatrixXd gram = gram_matrix(set.features());
  const Eigen::MatrixXd means = class_mean_vectors(set).columns();

  LinearizedTrace trace;
  trace.lambda_max = power_iteration(gram).eigenvalue;
  if (beta * trace.lambda_max >= 2.0) {
    std::ostringstream msg;
    msg << "linearised iteration would diverge: beta * lambda_max = "
        << beta * trace.lambda_max << " >= 2";
    throw NumericalError(msg.str());
  }
  trace.fixed_point = solve_gram(gram, means, 0.0);

  for (int c : checkpoints) trace.snapshots.emplace_back(c, Eigen::MatrixXd());
  auto snapshot = [&](int t, const Eigen::MatrixXd& w) {
    for (auto& [at, stored] : trace.snapshots) {
      if (at == t) stored = w;
    }
  };

  Eigen::MatrixXd w = w0.matrix();
  trace.distance.reserve(static_cast<std::size_t>(steps) + 1);
  trace.distance.push_back((w - trace.fixed_point).norm());
  snapshot(0, w);
  for (int t = 1; t <= steps; ++t) {
    w = linearized_step(gram, means, w, beta);
    trace.distance.push_back((w - trace.fixed_point).norm());
    snapshot(t, w);
  }
  return trace;
}

}  // namespace cvec
