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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "cvec/error.hpp"
#include "cvec/linalg.hpp"
#include "cvec/monitor.hpp"
#include "cvec/selflearn.hpp"
#include "oracles/oracles.hpp"

namespace cvec {
namespace {

ClassMeans means_of(Eigen::MatrixXd columns) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(columns.cols()), 1);
  return ClassMeans(std::move(columns), std::move(counts));
}

TEST(PseudoGradient, UniformPosteriorClosedForm) {
  Eigen::MatrixXd c(3, 3);
  c << 1, 0, 2,
       2, 1, 0,
       0, 3, 1;
  const auto means = means_of(c);
  const Eigen::Vector3d z(0.5, -1.0, 2.0);
  const auto g = pseudo_gradient(means, UnlabeledSet(z), WeightMatrix::zeros(3, 3));
  const Eigen::MatrixXd expected = means.normalized().colwise() - z / 3.0;
  EXPECT_LE((g - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoGradient, HandInstance) {
  // W = I on z = (1,0), (0,1), (1,1): P(0|z) = s(1), s(-1), 1/2 with s the logistic.
  Eigen::MatrixXd z(2, 3);
  z << 1, 0, 1,
       0, 1, 1;
  Eigen::MatrixXd c(2, 2);
  c << 3, 0,
       4, 2;
  const double s = 1.0 / (1.0 + std::exp(-1.0));
  Eigen::MatrixXd zp(2, 2);
  zp << s + 0.5, (1.0 - s) + 0.5,
        (1.0 - s) + 0.5, s + 0.5;
  Eigen::MatrixXd unit(2, 2);
  unit << 0.6, 0.0,
          0.8, 1.0;
  const auto means = means_of(c);
  const auto g =
      pseudo_gradient(means, UnlabeledSet(z), WeightMatrix(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_LE((g - (unit - zp)).cwiseAbs().maxCoeff(), 1e-15);
  const auto averaged = pseudo_gradient(
      means, UnlabeledSet(z), WeightMatrix(Eigen::MatrixXd::Identity(2, 2)), true);
  EXPECT_LE((averaged - (unit - zp / 3.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoGradient, ShapeErrors) {
  const auto means = means_of(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(pseudo_gradient(means, UnlabeledSet(Eigen::MatrixXd::Ones(3, 4)),
                               WeightMatrix::zeros(3, 2)),
               InvalidArgument);
  EXPECT_THROW(pseudo_gradient(means, UnlabeledSet(Eigen::MatrixXd::Ones(2, 4)),
                               WeightMatrix::zeros(2, 3)),
               InvalidArgument);
}

TEST(InitialWeights, MatchTheirDefinitions) {
  Rng rng(1);
  const auto train = make_blobs(3, 6, 30, 3.0, 1);
  const auto means = class_mean_vectors(train);
  const UnlabeledSet s(oracle::random_matrix(6, 40, rng));
  EXPECT_EQ(initial_weights(means, s, MinimumDistanceInit{}).matrix(),
            weights_from_means(means).matrix());
  const auto lin = initial_weights(means, s, LinearizationInit{0.25});
  Eigen::MatrixXd system = s.features() * s.features().transpose();
  system.diagonal().array() += 0.25;
  EXPECT_LE((system * lin.matrix() - means.normalized()).norm(), 1e-10);
  EXPECT_EQ(initial_weights(means, s, RandomInit{4}).matrix(), random_weights(6, 3, 4).matrix());
  EXPECT_LE(random_weights(6, 3, 4).matrix().cwiseAbs().maxCoeff(), 0.01);
}

TEST(PseudoGd, TraceStartsAtInitAndHasNoLoss) {
  const auto train = make_blobs(3, 6, 30, 3.0, 1);
  const auto test = mask_labels(make_blobs(3, 6, 30, 3.0, 2));
  const auto means = class_mean_vectors(train);
  const auto result = pseudo_gd(means, test.set, {1e-3, 10, MinimumDistanceInit{}}, &test.labels);
  ASSERT_EQ(result.trace.records.size(), 11u);
  EXPECT_EQ(*result.trace.records[0].e_marker,
            evaluate_e_marker(weights_from_means(means), means, test.set).e_marker);
  for (const auto& rec : result.trace.records) {
    EXPECT_FALSE(rec.loss.has_value());
    EXPECT_TRUE(rec.accuracy.has_value());
  }
  const auto blind = pseudo_gd(means, test.set, {1e-3, 10, MinimumDistanceInit{}});
  EXPECT_FALSE(blind.trace.records[3].accuracy.has_value());
}

TEST(PseudoGd, TrajectoryIgnoresHiddenLabels) {
  const auto train = make_blobs(4, 8, 40, 2.0, 5);
  const auto test = mask_labels(make_blobs(4, 8, 40, 2.0, 6));
  const auto means = class_mean_vectors(train);
  std::vector<std::size_t> order(160);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(7);
  shuffle(order, rng);
  const HiddenLabels scrambled = test.labels.permuted(order);
  const PseudoGdConfig config{2e-3, 50, RandomInit{3}};
  const auto a = pseudo_gd(means, test.set, config, &test.labels);
  const auto b = pseudo_gd(means, test.set, config, &scrambled);
  const auto c = pseudo_gd(means, test.set, config);
  EXPECT_EQ(a.weights.matrix(), b.weights.matrix());
  EXPECT_EQ(a.weights.matrix(), c.weights.matrix());
  for (std::size_t t = 0; t < a.trace.records.size(); ++t) {
    EXPECT_EQ(*a.trace.records[t].e_marker, *b.trace.records[t].e_marker);
  }
}

TEST(PseudoGd, FixedPointIsStationary) {
  // At W = 0 every posterior is 1/2, so (Z P)_i = (1, 1) / sqrt(2) for this Z.
  // Using those unit columns as C makes W = 0 a fixed point.
  const Eigen::MatrixXd z = std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2);
  const auto means = means_of(Eigen::MatrixXd::Constant(2, 2, 1.0 / std::sqrt(2.0)));
  const UnlabeledSet set(z);
  const auto g = pseudo_gradient(means, set, WeightMatrix::zeros(2, 2));
  EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::MatrixXd stepped = Eigen::MatrixXd::Zero(2, 2) + 0.1 * g;
  EXPECT_LE(stepped.cwiseAbs().maxCoeff(), 1e-16);
}

TEST(PseudoGd, ConfigValidation) {
  const auto means = means_of(Eigen::MatrixXd::Identity(2, 2));
  const UnlabeledSet set(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(pseudo_gd(means, set, {0.0, 10, MinimumDistanceInit{}}), InvalidArgument);
  EXPECT_THROW(pseudo_gd(means, set, {0.1, 0, MinimumDistanceInit{}}), InvalidArgument);
  EXPECT_THROW(pseudo_gd(means, set, {0.1, 1, LinearizationInit{-1.0}}), InvalidArgument);
  const HiddenLabels wrong({0, 1, 0});
  EXPECT_THROW(pseudo_gd(means, set, {0.1, 1, MinimumDistanceInit{}}, &wrong), InvalidArgument);
}

TEST(PseudoGd, SingularLinearizationNeedsRidge) {
  const auto means = means_of(Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd z(2, 3);
  z << 1, 2, 3,
       0, 0, 0;
  EXPECT_THROW(pseudo_gd(means, UnlabeledSet(z), {0.1, 1, LinearizationInit{0.0}}),
               NumericalError);
  EXPECT_NO_THROW(pseudo_gd(means, UnlabeledSet(z), {0.1, 1, LinearizationInit{1e-2}}));
}

TEST(PseudoGd, DivergenceNamesIteration) {
  // With C = -I every step lowers each weight by at least beta.
  const auto means = means_of(-Eigen::MatrixXd::Identity(2, 2));
  const UnlabeledSet set(Eigen::MatrixXd::Identity(2, 2));
  try {
    pseudo_gd(means, set, {1e308, 50, MinimumDistanceInit{}});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos);
  }
}

}  // namespace
}  // namespace cvec
