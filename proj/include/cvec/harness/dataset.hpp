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
#include <filesystem>
#include <vector>

#include "cvec/data.hpp"
#include "cvec/harness/config.hpp"

namespace cvec::harness {

// Batch files looked up inside a CIFAR-10 binary directory, in read order.
const std::vector<std::string>& cifar_batch_names();

// Draws `count` labelled images from the CIFAR-10 batches under `dir`
// (shuffled with `seed`) and converts them to 400-dim features.
LabeledSet load_cifar_pool(const std::filesystem::path& dir, std::size_t count,
                           std::uint64_t seed);

// Labelled feature CSV; every row must carry a label in [0, max].
LabeledSet load_feature_csv(const std::filesystem::path& path, int num_classes = 0);

// Train and test splits for direct-compare, monitor-run, selflearn, prepare.
TrainTestSplit load_train_test(const ExperimentConfig& config);

// Labelled pool for the zero-shot experiment. Blob pools use paired
// classes so seen and unseen classes share directions.
LabeledSet load_zeroshot_pool(const ExperimentConfig& config);

}  // namespace cvec::harness
