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

#include "cvec/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "cvec/io.hpp"
#include "cvec/rng.hpp"

namespace cvec::harness {

namespace fs = std::filesystem;

namespace {

// Separate stream for the train/test shuffle so it does not replay the
// blob generator's draws.
constexpr std::uint64_t kSplitStream = 0x9e3779b97f4a7c15ULL;

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

const std::vector<std::string>& cifar_batch_names() {
  static const std::vector<std::string> names{"data_batch_1.bin", "data_batch_2.bin",
                                              "data_batch_3.bin", "data_batch_4.bin",
                                              "data_batch_5.bin", "test_batch.bin"};
  return names;
}

LabeledSet load_cifar_pool(const fs::path& dir, std::size_t count, std::uint64_t seed) {
  std::vector<fs::path> files;
  std::vector<std::size_t> file_records;
  for (const auto& name : cifar_batch_names()) {
    const fs::path p = dir / name;
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) continue;
    const auto size = fs::file_size(p, ec);
    if (ec || size % kCifarRecordBytes != 0) {
      throw DataError("malformed CIFAR-10 batch " + p.string());
    }
    files.push_back(p);
    file_records.push_back(size / kCifarRecordBytes);
  }
  if (files.empty()) {
    throw DataError("no CIFAR-10 binary batches (data_batch_*.bin, test_batch.bin) found in " +
                    dir.string());
  }
  const std::size_t total = std::accumulate(file_records.begin(), file_records.end(),
                                            std::size_t{0});
  if (count > total) {
    throw DataError("requested " + std::to_string(count) + " CIFAR-10 samples but " +
                    dir.string() + " holds " + std::to_string(total));
  }

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  order.resize(count);

  // Map each selected global index to its output column, then read files one
  // at a time keeping only the selected records.
  std::vector<std::ptrdiff_t> column_of(total, -1);
  for (std::size_t c = 0; c < count; ++c) column_of[order[c]] = static_cast<std::ptrdiff_t>(c);

  Eigen::MatrixXd features(kFeatureDim, static_cast<Eigen::Index>(count));
  std::vector<int> labels(count, 0);
  std::size_t offset = 0;
  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto records = read_cifar10_file(files[f]);
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto col = column_of[offset + r];
      if (col < 0) continue;
      features.col(col) = extract_features(records[r].image);
      labels[static_cast<std::size_t>(col)] = records[r].label;
    }
    offset += file_records[f];
  }
  return LabeledSet(std::move(features), std::move(labels), kCifarClasses);
}

LabeledSet load_feature_csv(const fs::path& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature CSV " + path.string());
  auto table = io::read_feature_csv(in);
  int top = -1;
  for (int label : table.labels) {
    if (label < 0) throw DataError(path.string() + ": unlabelled row in a labelled feature CSV");
    top = std::max(top, label);
  }
  return LabeledSet(std::move(table.features), std::move(table.labels),
                    std::max(num_classes, top + 1));
}

TrainTestSplit load_train_test(const ExperimentConfig& config) {
  if (config.dataset == "cifar10") {
    const LabeledSet pool = load_cifar_pool(config.cifar_dir, config.train + config.test,
                                            config.data_seed);
    std::vector<std::size_t> train_idx(config.train);
    std::vector<std::size_t> test_idx(config.test);
    std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    std::iota(test_idx.begin(), test_idx.end(), config.train);
    return {take(pool, train_idx), take(pool, test_idx)};
  }
  if (config.dataset == "csv") {
    if (config.test_csv.empty()) throw ConfigError("dataset = csv requires test_csv here");
    LabeledSet train = load_feature_csv(config.train_csv);
    LabeledSet test = load_feature_csv(config.test_csv, train.num_classes());
    if (test.num_classes() != train.num_classes()) {
      throw DataError("test CSV has labels outside the training classes");
    }
    return {std::move(train), std::move(test)};
  }
  const auto per_class = ceil_div(config.train + config.test,
                                  static_cast<std::size_t>(config.blob_classes));
  const LabeledSet pool = make_blobs(config.blob_classes, config.blob_dim,
                                     static_cast<int>(per_class), config.blob_separation,
                                     config.data_seed);
  return split_train_test(pool, config.train, config.test, config.data_seed ^ kSplitStream);
}

LabeledSet load_zeroshot_pool(const ExperimentConfig& config) {
  if (config.dataset == "cifar10") {
    return load_cifar_pool(config.cifar_dir, config.zs_samples, config.data_seed);
  }
  if (config.dataset == "csv") return load_feature_csv(config.train_csv);
  if (config.blob_classes % 2 != 0) {
    throw ConfigError("zero-shot blobs need an even blob_classes (seen/unseen pairs)");
  }
  const auto per_class = ceil_div(config.zs_samples, static_cast<std::size_t>(config.blob_classes));
  return make_paired_blobs(config.blob_classes / 2, config.blob_dim, static_cast<int>(per_class),
                           config.blob_separation, config.blob_coupling, config.data_seed);
}

}  // namespace cvec::harness
