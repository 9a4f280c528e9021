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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "cvec/error.hpp"
#include "cvec/zeroshot.hpp"
#include "oracles/oracles.hpp"

namespace cvec {
namespace {

ClassMeans means_of(Eigen::MatrixXd columns) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(columns.cols()), 1);
  return ClassMeans(std::move(columns), std::move(counts));
}

ClassCorrelation correlation_of(Eigen::MatrixXd values) {
  std::vector<int> seen(static_cast<std::size_t>(values.rows()));
  std::vector<int> unseen(static_cast<std::size_t>(values.cols()));
  std::iota(seen.begin(), seen.end(), 10);
  std::iota(unseen.begin(), unseen.end(), 0);
  return {std::move(values), seen, unseen};
}

const std::vector<int> kSeen{5, 6};
const std::vector<int> kUnseen{0, 1};

TEST(ClassCorrelation, SameMeansGiveUnitDiagonal) {
  Eigen::MatrixXd c(3, 2);
  c << 1, 0,
       2, 1,
       0, 5;
  const auto r = class_correlation(means_of(c), kSeen, means_of(c), kUnseen);
  EXPECT_NEAR(r.values(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(r.values(1, 1), 1.0, 1e-15);
  EXPECT_EQ(r.seen_ids, kSeen);
  EXPECT_EQ(r.unseen_ids, kUnseen);
}

TEST(ClassCorrelation, OrthogonalMeansGiveZeros) {
  Eigen::MatrixXd a(4, 2), b(4, 2);
  a << 1, 0, 0, 2, 0, 0, 0, 0;
  b << 0, 0, 0, 0, 3, 0, 0, 1;
  const auto r = class_correlation(means_of(a), kSeen, means_of(b), kUnseen);
  EXPECT_EQ(r.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ClassCorrelation, HandInstance) {
  // a0 = (1,0), a1 = (1,1); b0 = (0,2), b1 = (3,4).
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 1,
       0, 1;
  b << 0, 3,
       2, 4;
  const auto r = class_correlation(means_of(a), kSeen, means_of(b), kUnseen);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(r.values(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(r.values(0, 1), 0.6, 1e-15);
  EXPECT_NEAR(r.values(1, 0), s, 1e-15);
  EXPECT_NEAR(r.values(1, 1), 7.0 / 5.0 * s, 1e-15);
}

TEST(ClassCorrelation, DimensionMismatchIsRejected) {
  EXPECT_THROW(class_correlation(means_of(Eigen::MatrixXd::Identity(2, 2)), kSeen,
                                 means_of(Eigen::MatrixXd::Identity(3, 2)), kUnseen),
               InvalidArgument);
}

TEST(ClassMap, IdentityAndReversal) {
  EXPECT_EQ(class_map(correlation_of(Eigen::MatrixXd::Identity(4, 4))).target,
            (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(class_map(correlation_of(Eigen::MatrixXd::Identity(4, 4).rowwise().reverse())).target,
            (std::vector<int>{3, 2, 1, 0}));
}

TEST(ClassMap, TiesKeepLexicographicallySmallest) {
  EXPECT_EQ(class_map(correlation_of(Eigen::MatrixXd::Zero(3, 3))).target,
            (std::vector<int>{0, 1, 2}));
}

TEST(ClassMap, MatchesIndependentSearch) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + trial % 5);
    Eigen::MatrixXd values(n, n);
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = rng.uniform(-1.0, 1.0);
    const auto r = correlation_of(values);
    const auto map = class_map(r);
    double best = 0.0;
    const auto expected = oracle::brute_force_assignment(values, &best);
    EXPECT_EQ(map.target, expected);
    double total = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) total += values(a, map(static_cast<int>(a)));
    EXPECT_EQ(total, best);
    std::vector<int> sorted = map.target;
    std::sort(sorted.begin(), sorted.end());
    for (Eigen::Index a = 0; a < n; ++a) EXPECT_EQ(sorted[static_cast<std::size_t>(a)], a);
  }
}

TEST(ClassMap, UnsupportedScope) {
  EXPECT_THROW(class_map(correlation_of(Eigen::MatrixXd::Zero(2, 3))), InvalidArgument);
  EXPECT_THROW(class_map(correlation_of(Eigen::MatrixXd::Identity(9, 9))), InvalidArgument);
  EXPECT_NO_THROW(class_map(correlation_of(Eigen::MatrixXd::Identity(8, 8))));
}

TEST(ClassifyR, IdentityCorrelationIsArgmax) {
  Rng rng(2);
  const auto r = correlation_of(Eigen::MatrixXd::Identity(4, 4));
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd p = oracle::random_matrix(4, 1, rng).array().exp();
    p /= p.sum();
    EXPECT_EQ(zeroshot_classify_R(p, r), r.unseen_ids[static_cast<std::size_t>(argmax(p))]);
  }
}

TEST(ClassifyR, HandInstanceAndConcentratedPosterior) {
  Eigen::MatrixXd values(2, 2);
  values << 1.0, 0.0,
            0.2, 0.9;
  const auto r = correlation_of(values);
  // pi = (0.6, 0.45).
  EXPECT_EQ(zeroshot_classify_R(Eigen::Vector2d(0.5, 0.5), r), 0);
  EXPECT_EQ(zeroshot_classify_R(Eigen::Vector2d(0.0, 1.0), r), 1);
  EXPECT_THROW(zeroshot_classify_R(Eigen::Vector3d(0.2, 0.3, 0.5), r), InvalidArgument);
}

TEST(ClassifyR, ZeroCorrelationFallsToFirstUnseen) {
  const auto r = correlation_of(Eigen::MatrixXd::Zero(3, 3));
  EXPECT_EQ(zeroshot_classify_R(Eigen::Vector3d(0.1, 0.8, 0.1), r), r.unseen_ids[0]);
}

TEST(ClassifyRho, ComposesMapWithArgmax) {
  Rng rng(3);
  ClassMap identity{{0, 1}, {5, 6}, {0, 1}};
  ClassMap reverse{{1, 0}, {5, 6}, {0, 1}};
  ClassMap shuffled{{2, 0, 3, 1}, {4, 5, 6, 7}, {0, 1, 2, 3}};
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd p2 = oracle::random_matrix(2, 1, rng).array().exp();
    p2 /= p2.sum();
    EXPECT_EQ(zeroshot_classify_rho(p2, identity), argmax(p2));
    EXPECT_EQ(zeroshot_classify_rho(p2, reverse), 1 - argmax(p2));
    Eigen::VectorXd p4 = oracle::random_matrix(4, 1, rng).array().exp();
    p4 /= p4.sum();
    EXPECT_EQ(zeroshot_classify_rho(p4, shuffled), shuffled(argmax(p4)));
  }
  EXPECT_THROW(zeroshot_classify_rho(Eigen::Vector3d::Ones(), identity), InvalidArgument);
}

TEST(ClassMapValidate, RejectsNonBijection) {
  ClassMap not_onto{{0, 0}, {5, 6}, {0, 1}};
  EXPECT_THROW(not_onto.validate(), DataError);
  ClassMap short_map{{0}, {5, 6}, {0, 1}};
  EXPECT_THROW(short_map.validate(), InvalidArgument);
}

struct ZeroShotFixture {
  ClassSubset seen;
  MaskedSet unseen;
  SideInformation side;
};

ZeroShotFixture paired_fixture() {
  const std::vector<int> seen_ids{3, 4, 5};
  const std::vector<int> unseen_ids{0, 1, 2};
  const auto pool = make_paired_blobs(3, 12, 200, 3.0, 0.9, 21);
  auto seen = select_classes(pool, seen_ids);
  auto unseen_subset = select_classes(pool, unseen_ids);
  const auto unseen_means = class_mean_vectors(unseen_subset.set);
  auto side = side_information_from_means(class_mean_vectors(seen.set), seen.class_ids,
                                          unseen_means, unseen_subset.class_ids);
  return {std::move(seen), mask_labels(unseen_subset.set, unseen_subset.class_ids),
          std::move(side)};
}

TEST(ZeroShotExperiment, CorrelatedPairsBeatChance) {
  const auto f = paired_fixture();
  EXPECT_EQ(f.side.map.target, (std::vector<int>{0, 1, 2}));
  for (auto mode : {ZeroShotMode::kMeansOnly, ZeroShotMode::kPseudoGd}) {
    ZeroShotConfig config{mode};
    const auto result = run_zeroshot_experiment(f.seen, f.unseen.set, f.unseen.labels, f.side, config);
    EXPECT_GT(result.accuracy_R, 1.0 / 3.0) << to_string(mode);
    EXPECT_GT(result.accuracy_rho, 1.0 / 3.0) << to_string(mode);
    for (int id : result.predicted_R) EXPECT_TRUE(id >= 0 && id <= 2);
  }
}

TEST(ZeroShotExperiment, ZeroCorrelationPredictsConstant) {
  auto f = paired_fixture();
  f.side.correlation.values.setZero();
  const auto result =
      run_zeroshot_experiment(f.seen, f.unseen.set, f.unseen.labels, f.side, {});
  for (int id : result.predicted_R) EXPECT_EQ(id, 0);
  const std::vector<int> constant(result.predicted_R.size(), 0);
  EXPECT_EQ(result.accuracy_R, f.unseen.labels.accuracy(constant));
}

TEST(ZeroShotExperiment, Guards) {
  auto f = paired_fixture();
  {
    auto side = f.side;
    side.correlation.unseen_ids = {0, 1, 3};
    side.map.unseen_ids = {0, 1, 3};
    EXPECT_THROW(run_zeroshot_experiment(f.seen, f.unseen.set, f.unseen.labels, side, {}),
                 InvalidArgument);
  }
  {
    auto side = f.side;
    side.correlation.seen_ids = {3, 5, 4};
    EXPECT_THROW(run_zeroshot_experiment(f.seen, f.unseen.set, f.unseen.labels, side, {}),
                 InvalidArgument);
  }
  {
    std::vector<int> leaked(static_cast<std::size_t>(f.unseen.set.size()), 0);
    leaked[7] = 4;
    EXPECT_THROW(run_zeroshot_experiment(f.seen, f.unseen.set, HiddenLabels(leaked), f.side, {}),
                 InvalidArgument);
  }
}

}  // namespace
}  // namespace cvec
