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

#include "cvec/zeroshot.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cvec/error.hpp"

namespace cvec {

namespace {

bool disjoint(std::span<const int> a, std::span<const int> b) {
  return std::none_of(a.begin(), a.end(), [&](int id) {
    return std::find(b.begin(), b.end(), id) != b.end();
  });
}

}  // namespace

void ClassCorrelation::validate() const {
  if (static_cast<std::size_t>(values.rows()) != seen_ids.size() ||
      static_cast<std::size_t>(values.cols()) != unseen_ids.size()) {
    throw InvalidArgument("class correlation: id lists do not match matrix shape");
  }
  if (values.size() == 0) throw InvalidArgument("class correlation is empty");
  if (!values.allFinite() || values.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
    throw DataError("class correlation entries must be finite and in [-1, 1]");
  }
}

void ClassMap::validate() const {
  if (target.size() != seen_ids.size()) {
    throw InvalidArgument("class map: one target per seen class required");
  }
  std::vector<bool> hit(unseen_ids.size(), false);
  for (int t : target) {
    if (t < 0 || static_cast<std::size_t>(t) >= unseen_ids.size()) {
      throw DataError("class map target out of range");
    }
    hit[static_cast<std::size_t>(t)] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
    throw DataError("class map is not onto the unseen classes");
  }
}

ClassCorrelation class_correlation(const ClassMeans& seen, std::span<const int> seen_ids,
                                   const ClassMeans& unseen, std::span<const int> unseen_ids) {
  if (seen.dim() != unseen.dim()) {
    throw InvalidArgument("class correlation: C-vector dimensions differ");
  }
  ClassCorrelation r{seen.normalized().transpose() * unseen.normalized(),
                     {seen_ids.begin(), seen_ids.end()},
                     {unseen_ids.begin(), unseen_ids.end()}};
  r.values = r.values.cwiseMax(-1.0).cwiseMin(1.0);
  r.validate();
  return r;
}

ClassMap class_map(const ClassCorrelation& correlation) {
  correlation.validate();
  const auto rows = static_cast<std::size_t>(correlation.values.rows());
  const auto cols = static_cast<std::size_t>(correlation.values.cols());
  if (rows != cols) {
    throw InvalidArgument("class_map: unsupported scope, correlation matrix is " +
                          std::to_string(rows) + " x " + std::to_string(cols) +
                          " (must be square)");
  }
  if (rows > kMaxExhaustiveClasses) {
    throw InvalidArgument("class_map: unsupported scope, " + std::to_string(rows) +
                          " classes exceed the exhaustive-search limit of " +
                          std::to_string(kMaxExhaustiveClasses));
  }
  std::vector<int> perm(rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t a = 0; a < rows; ++a) {
      total += correlation.values(static_cast<Eigen::Index>(a), perm[a]);
    }
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  ClassMap map{best, correlation.seen_ids, correlation.unseen_ids};
  map.validate();
  return map;
}

int zeroshot_classify_R(const Eigen::Ref<const Eigen::VectorXd>& seen_posterior,
                        const ClassCorrelation& correlation) {
  if (seen_posterior.size() != correlation.values.rows()) {
    throw InvalidArgument("zeroshot_classify_R: posterior has " +
                          std::to_string(seen_posterior.size()) + " entries, R has " +
                          std::to_string(correlation.values.rows()) + " rows");
  }
  const Eigen::VectorXd pi = correlation.values.transpose() * seen_posterior;
  return correlation.unseen_ids.at(static_cast<std::size_t>(argmax(pi)));
}

int zeroshot_classify_rho(const Eigen::Ref<const Eigen::VectorXd>& seen_posterior,
                          const ClassMap& map) {
  if (static_cast<std::size_t>(seen_posterior.size()) != map.target.size()) {
    throw InvalidArgument("zeroshot_classify_rho: posterior size does not match the map");
  }
  return map.unseen_ids.at(static_cast<std::size_t>(map(argmax(seen_posterior))));
}

SideInformation side_information_from_means(const ClassMeans& seen,
                                             std::span<const int> seen_ids,
                                             const ClassMeans& unseen,
                                             std::span<const int> unseen_ids) {
  ClassCorrelation r = class_correlation(seen, seen_ids, unseen, unseen_ids);
  ClassMap map = class_map(r);
  return {std::move(r), std::move(map)};
}

ZeroShotResult run_zeroshot_experiment(const ClassSubset& seen, const UnlabeledSet& unseen,
                                       const HiddenLabels& unseen_labels,
                                       const SideInformation& side,
                                       const ZeroShotConfig& config) {
  side.correlation.validate();
  side.map.validate();
  if (!disjoint(seen.class_ids, side.correlation.unseen_ids) ||
      !disjoint(seen.class_ids, side.map.unseen_ids)) {
    throw InvalidArgument("zero-shot: seen and unseen class sets overlap");
  }
  if (side.correlation.seen_ids != seen.class_ids || side.map.seen_ids != seen.class_ids) {
    throw InvalidArgument("zero-shot: side information rows do not match the seen classes");
  }
  if (unseen_labels.size() != static_cast<std::size_t>(unseen.size())) {
    throw InvalidArgument("zero-shot: hidden label count does not match the unseen set");
  }
  if (unseen_labels.contains_any(seen.class_ids)) {
    throw InvalidArgument("zero-shot: unseen set contains samples from seen classes");
  }

  const ClassMeans means = class_mean_vectors(seen.set);
  WeightMatrix w = config.mode == ZeroShotMode::kMeansOnly
                       ? weights_from_means(means)
                       : pseudo_gd(means, unseen, config.pseudo).weights;

  const Eigen::MatrixXd p = posteriors(w, unseen.features());
  ZeroShotResult result;
  result.mode = config.mode;
  result.predicted_R.reserve(static_cast<std::size_t>(p.rows()));
  result.predicted_rho.reserve(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    const Eigen::VectorXd row = p.row(s).transpose();
    result.predicted_R.push_back(zeroshot_classify_R(row, side.correlation));
    result.predicted_rho.push_back(zeroshot_classify_rho(row, side.map));
  }
  result.accuracy_R = unseen_labels.accuracy(result.predicted_R);
  result.accuracy_rho = unseen_labels.accuracy(result.predicted_rho);
  return result;
}

const char* to_string(ZeroShotMode mode) {
  return mode == ZeroShotMode::kMeansOnly ? "means_only" : "pseudo_gd";
}

}  // namespace cvec
