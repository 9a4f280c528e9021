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

#include "cvec/selflearn.hpp"

#include <cmath>
#include <string>

#include "cvec/error.hpp"
#include "cvec/linalg.hpp"
#include "cvec/monitor.hpp"

namespace cvec {

namespace {

void check_shapes(const ClassMeans& means, const UnlabeledSet& set) {
  if (means.dim() != set.dim()) {
    throw InvalidArgument("pseudo-gradient: C-vectors have n = " + std::to_string(means.dim()) +
                          ", set has n = " + std::to_string(set.dim()));
  }
}

Eigen::MatrixXd pseudo_direction(const Eigen::MatrixXd& unit_means, const UnlabeledSet& set,
                                 const WeightMatrix& w, bool normalize_zp) {
  Eigen::MatrixXd zp = set.features() * posteriors(w, set.features());
  if (normalize_zp) zp /= static_cast<double>(set.size());
  return unit_means - zp;
}

}  // namespace

void PseudoGdConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be > 0");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (const auto* lin = std::get_if<LinearizationInit>(&init); lin && lin->ridge < 0.0) {
    throw InvalidArgument("linearization ridge must be >= 0");
  }
}

Eigen::MatrixXd pseudo_gradient(const ClassMeans& means, const UnlabeledSet& set,
                                const WeightMatrix& w, bool normalize_zp) {
  check_shapes(means, set);
  if (w.dim() != set.dim() || w.num_classes() != means.num_classes()) {
    throw InvalidArgument("pseudo-gradient: weight shape does not match C-vectors");
  }
  if (set.size() == 0) throw InvalidArgument("pseudo-gradient needs a non-empty set");
  return pseudo_direction(means.normalized(), set, w, normalize_zp);
}

WeightMatrix initial_weights(const ClassMeans& means, const UnlabeledSet& set,
                             const PseudoGdInit& init) {
  check_shapes(means, set);
  return std::visit(
      [&](const auto& choice) -> WeightMatrix {
        using T = std::decay_t<decltype(choice)>;
        if constexpr (std::is_same_v<T, MinimumDistanceInit>) {
          return weights_from_means(means);
        } else if constexpr (std::is_same_v<T, LinearizationInit>) {
          return WeightMatrix(
              solve_gram(gram_matrix(set.features()), means.normalized(), choice.ridge));
        } else {
          return random_weights(means.dim(), means.num_classes(), choice.seed);
        }
      },
      init);
}

PseudoGdResult pseudo_gd(const ClassMeans& means, const UnlabeledSet& set,
                         const PseudoGdConfig& config, const HiddenLabels* eval) {
  config.validate();
  check_shapes(means, set);
  if (set.size() == 0) throw InvalidArgument("pseudo_gd needs a non-empty set");
  if (eval != nullptr && eval->size() != static_cast<std::size_t>(set.size())) {
    throw InvalidArgument("pseudo_gd: evaluation labels do not match the set size");
  }

  const Eigen::MatrixXd unit_means = means.normalized();
  PseudoGdResult result{initial_weights(means, set, config.init), {}};
  result.trace.records.reserve(static_cast<std::size_t>(config.iterations) + 1);

  auto record = [&](int t, const WeightMatrix& w) {
    TraceRecord rec;
    rec.t = t;
    rec.e_marker = evaluate_e_marker(w, means, set).e_marker;
    if (eval != nullptr) rec.accuracy = eval->accuracy(predict_all(w, set.features()));
    result.trace.records.push_back(rec);
  };

  record(0, result.weights);
  Eigen::MatrixXd current = result.weights.matrix();
  for (int t = 1; t <= config.iterations; ++t) {
    current += config.beta *
               pseudo_direction(unit_means, set, WeightMatrix(current), config.normalize_zp);
    if (!current.allFinite()) {
      throw NumericalError("pseudo-gradient descent diverged at iteration " +
                           std::to_string(t) + ": weights are not finite");
    }
    record(t, WeightMatrix(current));
  }
  result.weights = WeightMatrix(std::move(current));
  return result;
}

}  // namespace cvec
