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

#include "cvec/linalg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "cvec/error.hpp"
#include "cvec/rng.hpp"

namespace cvec {

PowerIterationResult power_iteration(const Eigen::Ref<const Eigen::MatrixXd>& sym, double tol,
                                     int max_iterations, std::uint64_t seed) {
  if (sym.rows() != sym.cols() || sym.rows() == 0) {
    throw InvalidArgument("power_iteration needs a non-empty square matrix");
  }
  PowerIterationResult result;
  Rng rng(seed);
  Eigen::VectorXd v(sym.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(0.5, 1.5);
  v.normalize();

  double estimate = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd next = sym * v;
    const double norm = next.norm();
    if (norm == 0.0) {
      // v lies in the null space; the matrix is PSD so that means zero.
      result.eigenvalue = 0.0;
      result.eigenvector = v;
      result.iterations = it;
      result.converged = true;
      return result;
    }
    next /= norm;
    const double rayleigh = next.dot(sym * next);
    result.iterations = it;
    if (std::abs(rayleigh - estimate) <= tol * std::abs(rayleigh)) {
      estimate = rayleigh;
      v = next;
      result.converged = true;
      break;
    }
    estimate = rayleigh;
    v = next;
  }
  result.eigenvalue = estimate;
  result.eigenvector = v;
  return result;
}

Eigen::MatrixXd solve_gram(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                           const Eigen::Ref<const Eigen::MatrixXd>& rhs, double ridge) {
  if (gram.rows() != gram.cols()) throw InvalidArgument("solve_gram: matrix is not square");
  if (gram.rows() != rhs.rows()) throw InvalidArgument("solve_gram: right-hand side mismatch");
  if (ridge < 0.0) throw InvalidArgument("solve_gram: ridge must be >= 0");

  Eigen::MatrixXd system = gram;
  system.diagonal().array() += ridge;
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond >= kMinReciprocalCondition)) {
    std::ostringstream msg;
    msg << "singular or ill-conditioned Gram system (ridge = " << ridge
        << ", reciprocal condition estimate = " << rcond
        << "); retry with a positive ridge";
    throw NumericalError(msg.str());
  }
  return llt.solve(rhs);
}

}  // namespace cvec
