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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cvec/classifier.hpp"
#include "cvec/data.hpp"
#include "cvec/selflearn.hpp"
#include "cvec/training.hpp"

namespace cvec {

// R(a, b) between seen classes a (rows) and unseen classes b (columns).
// seen_ids / unseen_ids carry the original class ids of rows and columns.
struct ClassCorrelation {
  Eigen::MatrixXd values;
  std::vector<int> seen_ids;
  std::vector<int> unseen_ids;

  void validate() const;
};

// Seen-to-unseen class map by position: target[a] is the column index of
// the unseen class assigned to seen class a. Must be onto.
struct ClassMap {
  std::vector<int> target;
  std::vector<int> seen_ids;
  std::vector<int> unseen_ids;

  void validate() const;
  int operator()(int seen_index) const { return target.at(static_cast<std::size_t>(seen_index)); }
};

// Cosine similarity between every seen and every unseen C-vector.
ClassCorrelation class_correlation(const ClassMeans& seen, std::span<const int> seen_ids,
                                   const ClassMeans& unseen, std::span<const int> unseen_ids);

inline constexpr std::size_t kMaxExhaustiveClasses = 8;

// Bijection maximising sum_a R(a, map(a)), found by enumerating every
// permutation in lexicographic order; ties keep the lexicographically
// smallest. Only square problems up to 8 classes are supported.
ClassMap class_map(const ClassCorrelation& correlation);

// argmax_b sum_a R(a, b) p(a); returns the unseen class id.
int zeroshot_classify_R(const Eigen::Ref<const Eigen::VectorXd>& seen_posterior,
                        const ClassCorrelation& correlation);

// map(argmax_a p(a)); returns the unseen class id.
int zeroshot_classify_rho(const Eigen::Ref<const Eigen::VectorXd>& seen_posterior,
                          const ClassMap& map);

struct SideInformation {
  ClassCorrelation correlation;
  ClassMap map;
};

// R from cosine similarity of the two sets' C-vectors and the map chosen
// from R. Building the unseen C-vectors needs class-labelled statistics of
// the unseen classes, which only a reference sample or external side
// information can provide.
SideInformation side_information_from_means(const ClassMeans& seen,
                                             std::span<const int> seen_ids,
                                             const ClassMeans& unseen,
                                             std::span<const int> unseen_ids);

enum class ZeroShotMode { kMeansOnly, kPseudoGd };

struct ZeroShotConfig {
  ZeroShotMode mode = ZeroShotMode::kMeansOnly;
  PseudoGdConfig pseudo{0.003, 200, MinimumDistanceInit{}, false};
};

struct ZeroShotResult {
  ZeroShotMode mode = ZeroShotMode::kMeansOnly;
  double accuracy_R = 0.0;
  double accuracy_rho = 0.0;
  std::vector<int> predicted_R;
  std::vector<int> predicted_rho;
};

// Classifies the unseen set with a seen-class classifier (unit C-vectors of
// `seen`, optionally refined by pseudo-gradient descent on the unseen set)
// and translates the seen-class posteriors with R and with the map. The
// hidden labels are read only for the final accuracies.
ZeroShotResult run_zeroshot_experiment(const ClassSubset& seen, const UnlabeledSet& unseen,
                                       const HiddenLabels& unseen_labels,
                                       const SideInformation& side, const ZeroShotConfig& config);

const char* to_string(ZeroShotMode mode);

}  // namespace cvec
