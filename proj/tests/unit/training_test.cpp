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

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "cvec/error.hpp"
#include "cvec/linalg.hpp"
#include "cvec/training.hpp"
#include "oracles/oracles.hpp"

namespace cvec {
namespace {

LabeledSet random_set(Rng& rng, Eigen::Index n, std::size_t count, int k, double scale = 1.0) {
  return LabeledSet(oracle::random_matrix(n, static_cast<Eigen::Index>(count), rng, scale),
                    oracle::covering_labels(count, k, rng), k);
}

TEST(ClassMeanVectors, OneSamplePerClassIsThatSample) {
  Eigen::MatrixXd x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  const auto means = class_mean_vectors(LabeledSet(x, {2, 0, 1}, 3));
  EXPECT_EQ(means.columns().col(2), x.col(0));
  EXPECT_EQ(means.columns().col(0), x.col(1));
  EXPECT_EQ(means.columns().col(1), x.col(2));
  EXPECT_EQ(means.counts()[0], 1u);
}

TEST(ClassMeanVectors, HandInstanceColumnSums) {
  // Class 0: (1,2) + (3,-1) = (4,1); class 1: (0,5) + (-2,2) = (-2,7).
  Eigen::MatrixXd x(2, 4);
  x << 1, 0, 3, -2,
       2, 5, -1, 2;
  const auto means = class_mean_vectors(LabeledSet(x, {0, 1, 0, 1}, 2));
  EXPECT_EQ(means.columns()(0, 0), 4.0);
  EXPECT_EQ(means.columns()(1, 0), 1.0);
  EXPECT_EQ(means.columns()(0, 1), -2.0);
  EXPECT_EQ(means.columns()(1, 1), 7.0);
}

TEST(ClassMeanVectors, DuplicatingTheSetDoublesEveryColumn) {
  Rng rng(1);
  const auto set = random_set(rng, 4, 15, 3);
  Eigen::MatrixXd doubled(4, 30);
  doubled << set.features(), set.features();
  std::vector<int> labels(set.labels().begin(), set.labels().end());
  labels.insert(labels.end(), set.labels().begin(), set.labels().end());
  const auto once = class_mean_vectors(set);
  const auto twice = class_mean_vectors(LabeledSet(doubled, labels, 3));
  EXPECT_LE((twice.columns() - 2.0 * once.columns()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ClassMeanVectors, ZeroNormColumnIsRejected) {
  Eigen::MatrixXd x(1, 3);
  x << 1.0, 2.0, -2.0;
  EXPECT_THROW(class_mean_vectors(LabeledSet(x, {0, 1, 1}, 2)), DataError);
}

TEST(Gradient, PerSampleAndMatrixFormsAgree) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = static_cast<int>(2 + rng.index(4));
    const auto set = random_set(rng, static_cast<Eigen::Index>(1 + rng.index(8)),
                                static_cast<std::size_t>(k) + rng.index(40), k);
    const WeightMatrix w(oracle::random_matrix(set.dim(), k, rng));
    EXPECT_LE((gradient(w, set) - gradient_per_sample(w, set)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Gradient, MatchesCentralDifferencesOfLoss) {
  Rng rng(3);
  const auto set = random_set(rng, 5, 20, 3);
  const Eigen::MatrixXd w = oracle::random_matrix(5, 3, rng, 0.5);
  const std::vector<int> labels(set.labels().begin(), set.labels().end());
  const auto fd = oracle::central_difference(
      [&](const Eigen::MatrixXd& probe) {
        return oracle::loop_cross_entropy(probe, set.features(), labels);
      },
      w, 1e-5);
  const Eigen::MatrixXd g = gradient(WeightMatrix(w), set);
  EXPECT_LT((fd + g).norm() / g.norm(), 1e-5);
}

TEST(Gradient, NormShrinksAlongSmallStepsOnSeparablePair) {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, -1.0,
       0.5, 0.5;
  const LabeledSet set(x, {0, 1}, 2);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  double previous = gradient(WeightMatrix(w), set).norm();
  for (int step = 0; step < 200; ++step) {
    w += 0.05 * gradient(WeightMatrix(w), set);
    const double now = gradient(WeightMatrix(w), set).norm();
    EXPECT_LT(now, previous);
    previous = now;
  }
  EXPECT_LT(previous, 0.2);
}

TEST(TrainGd, RejectsZeroIterationsAndBadBeta) {
  Rng rng(4);
  const auto set = random_set(rng, 3, 10, 2);
  EXPECT_THROW(train_gd(set, {0.1, 0, ZeroInit{}}), InvalidArgument);
  EXPECT_THROW(train_gd(set, {0.0, 5, ZeroInit{}}), InvalidArgument);
  EXPECT_THROW(train_gd(set, {0.1, 5, WeightMatrix::zeros(4, 2)}), InvalidArgument);
}

TEST(TrainGd, FirstStepFromZerosHasClosedForm) {
  Rng rng(5);
  const auto set = random_set(rng, 4, 12, 3);
  const double beta = 0.01;
  const auto result = train_gd(set, {beta, 1, ZeroInit{}});
  // Uniform posterior at W = 0: X P = (sum of samples) / K in every column.
  const Eigen::VectorXd total = set.features().rowwise().sum();
  const Eigen::MatrixXd c = class_mean_vectors(set).columns();
  const Eigen::MatrixXd expected = beta * (c.colwise() - total / 3.0);
  EXPECT_LE((result.weights.matrix() - expected).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_EQ(result.trace.records.size(), 2u);
  EXPECT_NEAR(*result.trace.records[0].loss, 12.0 * std::log(3.0), 1e-12);
}

TEST(TrainGd, SmallStepLossNeverRises) {
  Rng rng(6);
  const auto set = random_set(rng, 5, 60, 3);
  const double lambda = power_iteration(gram_matrix(set.features())).eigenvalue;
  const auto result = train_gd(set, {1e-3 / lambda, 400, RandomInit{9}});
  ASSERT_EQ(result.trace.records.size(), 401u);
  for (std::size_t t = 1; t < result.trace.records.size(); ++t) {
    const double prev = *result.trace.records[t - 1].loss;
    EXPECT_LE(*result.trace.records[t].loss, prev + 1e-9) << "t = " << t;
  }
}

TEST(TrainGd, UnitScaleStepDescendsOver400Iterations) {
  Rng rng(7);
  const auto set = random_set(rng, 4, 50, 3);
  const auto result = train_gd(set, {1e-4, 400, ZeroInit{}});
  for (std::size_t t = 1; t < result.trace.records.size(); ++t) {
    const double prev = *result.trace.records[t - 1].loss;
    EXPECT_LE(*result.trace.records[t].loss, prev + 1e-6 * std::abs(prev));
  }
  EXPECT_LT(*result.trace.records.back().loss, *result.trace.records.front().loss);
}

TEST(TrainGd, MonitorColumnsArePopulated) {
  const auto train = make_blobs(3, 5, 30, 4.0, 1);
  const auto test = mask_labels(make_blobs(3, 5, 20, 4.0, 2));
  const auto result = train_gd(train, {1e-3, 5, RandomInit{1}}, &test.set, &test.labels);
  for (const auto& rec : result.trace.records) {
    EXPECT_TRUE(rec.loss && rec.e_marker && rec.accuracy);
  }
  const auto plain = train_gd(train, {1e-3, 5, RandomInit{1}});
  EXPECT_FALSE(plain.trace.records[0].e_marker.has_value());
  EXPECT_EQ(plain.weights.matrix(), result.weights.matrix());
}

TEST(TrainGd, NonFiniteProgressReportsIteration) {
  Rng rng(8);
  const auto set = random_set(rng, 3, 10, 2, 10.0);
  try {
    train_gd(set, {1e307, 3, RandomInit{1}});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos) << e.what();
  }
}

TEST(WeightsFromMeans, UnitColumnsAndCosineArgmax) {
  Rng rng(9);
  const auto set = random_set(rng, 6, 30, 4);
  const auto means = class_mean_vectors(set);
  const auto w = weights_from_means(means);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(w.column(k).norm(), 1.0, 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = oracle::random_matrix(6, 1, rng);
    Eigen::VectorXd cosines(4);
    for (int k = 0; k < 4; ++k) {
      cosines(k) = means.columns().col(k).dot(x) / (means.columns().col(k).norm() * x.norm());
    }
    EXPECT_EQ(predict(w, x), argmax(cosines));
  }
}

TEST(WeightsLinearized, IdentityGramReturnsMeans) {
  // Two samples per axis at +-1/sqrt(2) make X X' = I.
  const double a = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd x(2, 4);
  x << a, a, 0, 0,
       0, 0, a, -a;
  const LabeledSet set(x, {0, 1, 1, 0}, 2);
  ASSERT_LE((gram_matrix(x) - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  const auto w = weights_linearized(set);
  EXPECT_LE((w.matrix() - class_mean_vectors(set).columns()).norm(), 1e-14);
}

TEST(WeightsLinearized, DiagonalHandSolve) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0,
       0, 2;
  const auto w = weights_linearized(LabeledSet(x, {0, 1}, 2));
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0,
              0, 0.5;
  EXPECT_LE((w.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(WeightsLinearized, FixedPointResidualIsTiny) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(10));
    const auto set = random_set(rng, n, static_cast<std::size_t>(5 * n), 3);
    const double ridge = trial % 2 == 0 ? 0.0 : 0.3;
    const auto w = weights_linearized(set, ridge);
    Eigen::MatrixXd system = gram_matrix(set.features());
    system.diagonal().array() += ridge;
    const Eigen::MatrixXd c = class_mean_vectors(set).columns();
    EXPECT_LT((system * w.matrix() - c).norm() / c.norm(), 1e-10);
  }
}

TEST(WeightsLinearized, RankDeficientNeedsRidge) {
  // Third coordinate is identically zero.
  Eigen::MatrixXd x(3, 4);
  x << 1, 2, -1, 0.5,
       0, 1, 3, -2,
       0, 0, 0, 0;
  const LabeledSet set(x, {0, 1, 0, 1}, 2);
  EXPECT_THROW(weights_linearized(set, 0.0), NumericalError);
  EXPECT_NO_THROW(weights_linearized(set, 1e-3));
}

struct LinearSystem {
  LabeledSet set;
  Eigen::MatrixXd gram;
  double lambda_max;
};

LinearSystem random_system(Rng& rng, Eigen::Index n) {
  auto set = random_set(rng, n, static_cast<std::size_t>(10 * n), 3);
  Eigen::MatrixXd gram = gram_matrix(set.features());
  const double lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues()(n - 1);
  return {std::move(set), std::move(gram), lambda};
}

TEST(IterateLinearized, FixedPointStaysPut) {
  Rng rng(11);
  const auto sys = random_system(rng, 4);
  const auto w_star = weights_linearized(sys.set);
  const auto trace = iterate_linearized(sys.set, w_star, 0.5 / sys.lambda_max, 50);
  for (double d : trace.distance) EXPECT_LT(d, 1e-12);
}

TEST(IterateLinearized, ContractionIsMonotone) {
  Rng rng(12);
  const auto sys = random_system(rng, 6);
  const auto trace =
      iterate_linearized(sys.set, WeightMatrix(oracle::random_matrix(6, 3, rng)),
                         0.9 / sys.lambda_max, 300);
  for (std::size_t t = 1; t < trace.distance.size(); ++t) {
    EXPECT_LE(trace.distance[t], trace.distance[t - 1] + 1e-14);
  }
}

TEST(IterateLinearized, MatchesDiscreteClosedForm) {
  Rng rng(13);
  const auto sys = random_system(rng, 5);
  const WeightMatrix w0(oracle::random_matrix(5, 3, rng));
  const double beta = 0.5 / sys.lambda_max;
  const std::vector<int> checkpoints{1, 10, 100};
  const auto trace = iterate_linearized(sys.set, w0, beta, 200, checkpoints);
  EXPECT_LT(trace.distance.back(), 1e-6 * trace.distance.front());
  const Eigen::MatrixXd w_star = weights_linearized(sys.set).matrix();
  for (const auto& [t, w_t] : trace.snapshots) {
    const Eigen::MatrixXd expected =
        oracle::linear_dynamics_closed_form(sys.gram, w0.matrix(), w_star, beta, t);
    EXPECT_LT((w_t - w_star - expected).cwiseAbs().maxCoeff(), 1e-8) << "t = " << t;
  }
}

TEST(IterateLinearized, TooLargeStepIsRejectedAndWouldDiverge) {
  Rng rng(14);
  const auto sys = random_system(rng, 5);
  const WeightMatrix w0(oracle::random_matrix(5, 3, rng));
  const double beta = 2.2 / sys.lambda_max;
  EXPECT_THROW(iterate_linearized(sys.set, w0, beta, 10), NumericalError);

  const Eigen::MatrixXd c = class_mean_vectors(sys.set).columns();
  const Eigen::MatrixXd w_star = weights_linearized(sys.set).matrix();
  Eigen::MatrixXd w = w0.matrix();
  const double start = (w - w_star).norm();
  for (int t = 0; t < 200; ++t) w = linearized_step(sys.gram, c, w, beta);
  EXPECT_GT((w - w_star).norm(), 1e3 * start);
}

}  // namespace
}  // namespace cvec
