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

#include "cvec/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvec/error.hpp"

namespace cvec {

ResponseSums class_response_sums(const WeightMatrix& w,
                                 const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  if (samples.cols() == 0) throw InvalidArgument("response sums need a non-empty set");
  const auto assigned = predict_all(w, samples);
  ResponseSums sums{Eigen::MatrixXd::Zero(w.dim(), w.num_classes()),
                    std::vector<std::size_t>(static_cast<std::size_t>(w.num_classes()), 0)};
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    const int k = assigned[static_cast<std::size_t>(s)];
    sums.columns.col(k) += samples.col(s);
    ++sums.assigned_counts[static_cast<std::size_t>(k)];
  }
  return sums;
}

ResponseSums class_response_sums(const WeightMatrix& w, const UnlabeledSet& set) {
  return class_response_sums(w, set.features());
}

EMarkerReport e_marker(const ClassMeans& means, const ResponseSums& sums) {
  if (means.dim() != sums.columns.rows() || means.num_classes() != sums.columns.cols()) {
    throw InvalidArgument("e_marker: C-vectors and response sums differ in shape");
  }
  const int k_count = means.num_classes();
  EMarkerReport report;
  report.per_class_e2.resize(k_count);
  report.per_class_cos.resize(k_count);
  const Eigen::MatrixXd c_unit = means.normalized();
  for (int k = 0; k < k_count; ++k) {
    const double m_norm = sums.columns.col(k).norm();
    if (!(m_norm > 0.0)) {
      report.per_class_e2(k) = 1.0;
      report.per_class_cos(k) = -1.0;
      report.empty_classes.push_back(k);
      continue;
    }
    const Eigen::VectorXd m_unit = sums.columns.col(k) / m_norm;
    const double e2 = 0.25 * (c_unit.col(k) - m_unit).squaredNorm();
    report.per_class_e2(k) = std::clamp(e2, 0.0, 1.0);
    report.per_class_cos(k) = std::clamp(c_unit.col(k).dot(m_unit), -1.0, 1.0);
  }
  report.e_marker = std::sqrt(report.per_class_e2.mean());
  return report;
}

EMarkerReport evaluate_e_marker(const WeightMatrix& w, const ClassMeans& means,
                                const UnlabeledSet& set) {
  return e_marker(means, class_response_sums(w, set));
}

MovingWindowMonitor::MovingWindowMonitor(WeightMatrix weights, ClassMeans means,
                                         WindowConfig config)
    : weights_(std::move(weights)), means_(std::move(means)), config_(config) {
  if (config_.stride < 1) throw InvalidArgument("window stride must be >= 1");
  if (config_.window < static_cast<std::size_t>(weights_.num_classes())) {
    throw InvalidArgument("window of " + std::to_string(config_.window) +
                          " samples is smaller than K = " +
                          std::to_string(weights_.num_classes()));
  }
  if (weights_.dim() != means_.dim() || weights_.num_classes() != means_.num_classes()) {
    throw InvalidArgument("moving window: weights and C-vectors differ in shape");
  }
}

std::optional<WindowedMarker> MovingWindowMonitor::push(
    const Eigen::Ref<const Eigen::VectorXd>& sample) {
  if (!sample.allFinite()) throw DataError("stream sample " + std::to_string(seen_) +
                                           " has non-finite features");
  buffer_.push_back({sample, predict(weights_, sample)});
  if (buffer_.size() > config_.window) buffer_.pop_front();
  const std::size_t index = seen_++;
  if (index + 1 < config_.window || (index + 1 - config_.window) % config_.stride != 0) {
    return std::nullopt;
  }
  ResponseSums sums{Eigen::MatrixXd::Zero(weights_.dim(), weights_.num_classes()),
                    std::vector<std::size_t>(static_cast<std::size_t>(weights_.num_classes()), 0)};
  for (const auto& entry : buffer_) {
    sums.columns.col(entry.assigned) += entry.sample;
    ++sums.assigned_counts[static_cast<std::size_t>(entry.assigned)];
  }
  return WindowedMarker{index, e_marker(means_, sums)};
}

std::vector<WindowedMarker> windowed_e_marker(const WeightMatrix& w, const ClassMeans& means,
                                              const Eigen::Ref<const Eigen::MatrixXd>& stream,
                                              WindowConfig config) {
  if (stream.rows() != w.dim()) {
    throw InvalidArgument("windowed_e_marker: stream dimension differs from weights");
  }
  MovingWindowMonitor monitor(w, means, config);
  std::vector<WindowedMarker> out;
  for (Eigen::Index s = 0; s < stream.cols(); ++s) {
    if (auto marker = monitor.push(stream.col(s))) out.push_back(std::move(*marker));
  }
  return out;
}

}  // namespace cvec
