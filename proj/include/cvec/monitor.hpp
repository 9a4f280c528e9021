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
#include <deque>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cvec/classifier.hpp"
#include "cvec/data.hpp"
#include "cvec/training.hpp"

namespace cvec {

// Sums of the unlabelled samples by predicted class. Column i holds the sum
// of the samples whose largest posterior falls on class i.
struct ResponseSums {
  Eigen::MatrixXd columns;
  std::vector<std::size_t> assigned_counts;
};

ResponseSums class_response_sums(const WeightMatrix& w, const UnlabeledSet& set);
ResponseSums class_response_sums(const WeightMatrix& w,
                                 const Eigen::Ref<const Eigen::MatrixXd>& samples);

struct EMarkerReport {
  Eigen::VectorXd per_class_e2;
  Eigen::VectorXd per_class_cos;
  double e_marker = 0.0;
  std::vector<int> empty_classes;
};

// E_i^2 = 1/4 ||C_i/||C_i|| - M_i/||M_i||||^2 and E = sqrt(mean_i E_i^2) over
// all K classes. A class with no assigned samples scores E_i^2 = 1 (and
// cos = -1) and is listed in empty_classes.
EMarkerReport e_marker(const ClassMeans& means, const ResponseSums& sums);

// class_response_sums followed by e_marker.
EMarkerReport evaluate_e_marker(const WeightMatrix& w, const ClassMeans& means,
                                const UnlabeledSet& set);

struct WindowConfig {
  std::size_t window = 500;
  std::size_t stride = 100;
};

struct WindowedMarker {
  std::size_t end_index = 0;
  EMarkerReport report;
};

// Moving-window E-Marker over a sample stream. Samples are pushed in order;
// once `window` samples have arrived a report is produced at end indices
// window-1, window-1+stride, ... over the most recent `window` samples.
class MovingWindowMonitor {
 public:
  MovingWindowMonitor(WeightMatrix weights, ClassMeans means, WindowConfig config);

  std::optional<WindowedMarker> push(const Eigen::Ref<const Eigen::VectorXd>& sample);

  std::size_t seen() const { return seen_; }

 private:
  struct Entry {
    Eigen::VectorXd sample;
    int assigned;
  };

  WeightMatrix weights_;
  ClassMeans means_;
  WindowConfig config_;
  std::deque<Entry> buffer_;
  std::size_t seen_ = 0;
};

// Runs a MovingWindowMonitor over the columns of `stream`. A stream shorter
// than the window yields no reports.
std::vector<WindowedMarker> windowed_e_marker(const WeightMatrix& w, const ClassMeans& means,
                                              const Eigen::Ref<const Eigen::MatrixXd>& stream,
                                              WindowConfig config = {});

}  // namespace cvec
