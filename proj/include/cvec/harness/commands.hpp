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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cvec/classifier.hpp"
#include "cvec/harness/config.hpp"
#include "cvec/training.hpp"
#include "cvec/zeroshot.hpp"

namespace cvec::harness {

// <outdir>/<command>/<run-id>, created on demand.
std::filesystem::path run_directory(const ExperimentConfig& config, const std::string& command);

// Pearson correlation over the positions where both series are finite.
// NaN when fewer than two such positions exist or a series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct PrepareReport {
  std::filesystem::path dir;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
};
// Writes train.csv, test.csv (labelled) and test_masked.csv (label -1).
PrepareReport cmd_prepare(const ExperimentConfig& config);

struct MethodRow {
  std::string method;
  double accuracy = 0.0;
  double train_loss = 0.0;
};
struct DirectCompareReport {
  std::filesystem::path dir;
  // means, linearized, gradient_descent.
  std::vector<MethodRow> rows;
  double random_weights_loss = 0.0;
};
DirectCompareReport cmd_direct_compare(const ExperimentConfig& config);

struct MonitorRunReport {
  std::filesystem::path dir;
  TrainTrace trace;
  std::vector<double> log_accuracy_ratio;
  std::vector<double> neg_log_marker_ratio;
  double correlation = 0.0;
};
MonitorRunReport cmd_monitor_run(const ExperimentConfig& config);

struct SelflearnRun {
  std::string init;
  TrainTrace trace;
  std::vector<int> predictions;
};
struct PairwiseAgreement {
  std::string first;
  std::string second;
  double e_marker_diff = 0.0;
  double accuracy_diff = 0.0;
  double prediction_agreement = 0.0;
};
struct SelflearnReport {
  std::filesystem::path dir;
  std::vector<SelflearnRun> runs;
  std::vector<PairwiseAgreement> agreement;
};
SelflearnReport cmd_selflearn(const ExperimentConfig& config);

struct ZeroshotCommandReport {
  std::filesystem::path dir;
  SideInformation side;
  std::vector<ZeroShotResult> results;  // means_only, pseudo_gd
};
ZeroshotCommandReport cmd_zeroshot(const ExperimentConfig& config);

}  // namespace cvec::harness
