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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cvec/error.hpp"

namespace cvec::harness {

// Unknown keys, malformed values and inconsistent settings.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Every setting of an experiment run. Keys in the config file and the
// command-line flags use the member names verbatim.
struct ExperimentConfig {
  // blobs | cifar10 | csv
  std::string dataset = "blobs";
  std::string cifar_dir;
  std::string train_csv;
  std::string test_csv;

  int blob_classes = 10;
  int blob_dim = 40;
  double blob_separation = 4.0;
  double blob_coupling = 0.8;

  std::size_t train = 3000;
  std::size_t test = 1500;
  std::size_t zs_samples = 4500;
  std::vector<int> seen_classes{5, 6, 7, 8, 9};
  std::vector<int> unseen_classes{0, 1, 2, 3, 4};

  std::uint64_t data_seed = 1;
  std::uint64_t init_seed = 2;

  double beta = 0.003;
  int iterations = 400;
  double ridge = 0.0;
  std::size_t window = 500;
  std::size_t stride = 100;

  double pseudo_beta = 0.003;
  int pseudo_iterations = 200;
  double pseudo_ridge = 0.0;
  bool normalize_zp = false;

  std::string side_info_r;
  std::string side_info_rho;
  std::string init_weights;

  std::string outdir = "out";
  std::string run_id;

  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;
  void validate() const;
};

// Names accepted by ExperimentConfig::set, in canonical order.
const std::vector<std::string>& config_keys();

// `key = value` lines; '#' starts a comment; blank lines are ignored.
std::map<std::string, std::string> parse_key_value(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

ExperimentConfig config_from_map(const std::map<std::string, std::string>& values);

// Canonical `key = value` text of every setting, excluding outdir and run_id.
std::string canonical_text(const ExperimentConfig& config);

// run_id when set, otherwise a stable hash of canonical_text.
std::string effective_run_id(const ExperimentConfig& config);

}  // namespace cvec::harness
