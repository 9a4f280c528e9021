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

#include <Eigen/Core>

namespace cvec {

struct PowerIterationResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  int iterations = 0;
  bool converged = false;
};

// Dominant eigenvalue of a symmetric positive semi-definite matrix by power
// iteration with a Rayleigh-quotient estimate. Stops when successive
// estimates differ by less than tol relative to the estimate.
PowerIterationResult power_iteration(const Eigen::Ref<const Eigen::MatrixXd>& sym,
                                     double tol = 1e-12, int max_iterations = 10000,
                                     std::uint64_t seed = 0x5eed);

// Largest reciprocal condition number accepted by solve_gram.
inline constexpr double kMinReciprocalCondition = 1e-12;

// Solves (gram + ridge * I) W = rhs by Cholesky factorisation. Throws
// NumericalError when the system is not positive definite or its estimated
// condition number exceeds 1e12.
Eigen::MatrixXd solve_gram(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                           const Eigen::Ref<const Eigen::MatrixXd>& rhs, double ridge);

}  // namespace cvec
