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

#include "cvec/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "cvec/error.hpp"
#include "cvec/rng.hpp"

namespace cvec {

std::vector<CifarRecord> parse_cifar10(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCifarRecordBytes != 0) {
    throw DataError("malformed CIFAR-10 batch: " + std::to_string(bytes.size()) +
                    " bytes is not a multiple of " + std::to_string(kCifarRecordBytes));
  }
  const std::size_t count = bytes.size() / kCifarRecordBytes;
  std::vector<CifarRecord> records(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto record = bytes.subspan(r * kCifarRecordBytes, kCifarRecordBytes);
    if (record[0] >= kCifarClasses) {
      throw DataError("corrupt CIFAR-10 record " + std::to_string(r) + ": label byte " +
                      std::to_string(record[0]) + " > 9");
    }
    records[r].label = record[0];
    std::copy(record.begin() + 1, record.end(), records[r].image.planes.begin());
  }
  return records;
}

std::vector<std::uint8_t> serialize_cifar10(std::span<const CifarRecord> records) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(records.size() * kCifarRecordBytes);
  for (const auto& rec : records) {
    bytes.push_back(static_cast<std::uint8_t>(rec.label));
    bytes.insert(bytes.end(), rec.image.planes.begin(), rec.image.planes.end());
  }
  return bytes;
}

std::vector<CifarRecord> read_cifar10_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CIFAR-10 batch " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_cifar10(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace {

struct SourceTap {
  int lo;
  int hi;
  double frac;
};

// Pixel-centre aligned source coordinate of output index i.
SourceTap source_tap(int i) {
  constexpr double scale = static_cast<double>(kCifarSide) / kFeatureSide;
  double s = (i + 0.5) * scale - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(kCifarSide - 1));
  const int lo = static_cast<int>(std::floor(s));
  const int hi = std::min(lo + 1, kCifarSide - 1);
  return {lo, hi, s - lo};
}

}  // namespace

Eigen::VectorXd extract_features(const RawImage& image) {
  std::array<double, kCifarPlane> luma{};
  for (int r = 0; r < kCifarSide; ++r) {
    for (int c = 0; c < kCifarSide; ++c) {
      luma[static_cast<std::size_t>(r * kCifarSide + c)] =
          0.299 * image.at(0, r, c) + 0.587 * image.at(1, r, c) + 0.114 * image.at(2, r, c);
    }
  }
  auto px = [&](int r, int c) { return luma[static_cast<std::size_t>(r * kCifarSide + c)]; };

  Eigen::VectorXd out(kFeatureDim);
  for (int oy = 0; oy < kFeatureSide; ++oy) {
    const SourceTap ty = source_tap(oy);
    for (int ox = 0; ox < kFeatureSide; ++ox) {
      const SourceTap tx = source_tap(ox);
      const double top = (1.0 - tx.frac) * px(ty.lo, tx.lo) + tx.frac * px(ty.lo, tx.hi);
      const double bottom = (1.0 - tx.frac) * px(ty.hi, tx.lo) + tx.frac * px(ty.hi, tx.hi);
      const double v = (1.0 - ty.frac) * top + ty.frac * bottom;
      out(oy * kFeatureSide + ox) = std::clamp(v / 255.0, 0.0, 1.0);
    }
  }
  return out;
}

Eigen::MatrixXd extract_features(std::span<const CifarRecord> records) {
  Eigen::MatrixXd out(kFeatureDim, static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = extract_features(records[i].image);
  }
  return out;
}

LabeledSet::LabeledSet(Eigen::MatrixXd features, std::vector<int> labels, int num_classes)
    : features_(std::move(features)), labels_(std::move(labels)), num_classes_(num_classes) {
  if (num_classes_ < 1) throw InvalidArgument("labelled set needs at least one class");
  if (features_.rows() < 1) throw InvalidArgument("labelled set needs dimension >= 1");
  if (static_cast<std::size_t>(features_.cols()) != labels_.size()) {
    throw InvalidArgument("labelled set: " + std::to_string(features_.cols()) +
                          " samples but " + std::to_string(labels_.size()) + " labels");
  }
  if (!features_.allFinite()) throw DataError("labelled set contains non-finite features");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] >= num_classes_) {
      throw DataError("sample " + std::to_string(i) + " has label " +
                      std::to_string(labels_[i]) + " outside [0, " +
                      std::to_string(num_classes_) + ")");
    }
  }
  const auto counts = class_counts();
  for (int k = 0; k < num_classes_; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      throw DataError("class " + std::to_string(k) + " has no samples");
    }
  }
}

std::vector<std::size_t> LabeledSet::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int label : labels_) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

UnlabeledSet::UnlabeledSet(Eigen::MatrixXd features) : features_(std::move(features)) {
  if (features_.rows() < 1) throw InvalidArgument("unlabelled set needs dimension >= 1");
  if (!features_.allFinite()) throw DataError("unlabelled set contains non-finite features");
}

HiddenLabels::HiddenLabels(std::vector<int> labels) : labels_(std::move(labels)) {}

double HiddenLabels::accuracy(std::span<const int> predicted) const {
  if (labels_.empty()) throw InvalidArgument("accuracy of an empty set is undefined");
  if (predicted.size() != labels_.size()) {
    throw InvalidArgument("accuracy: " + std::to_string(predicted.size()) +
                          " predictions for " + std::to_string(labels_.size()) + " labels");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) hits += predicted[i] == labels_[i];
  return static_cast<double>(hits) / static_cast<double>(labels_.size());
}

bool HiddenLabels::contains_any(std::span<const int> ids) const {
  return std::any_of(labels_.begin(), labels_.end(), [&](int label) {
    return std::find(ids.begin(), ids.end(), label) != ids.end();
  });
}

HiddenLabels HiddenLabels::permuted(std::span<const std::size_t> order) const {
  if (order.size() != labels_.size()) throw InvalidArgument("permutation size mismatch");
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = labels_.at(order[i]);
  return HiddenLabels(std::move(out));
}

MaskedSet mask_labels(const LabeledSet& set) {
  std::vector<int> ids(static_cast<std::size_t>(set.num_classes()));
  std::iota(ids.begin(), ids.end(), 0);
  return mask_labels(set, ids);
}

MaskedSet mask_labels(const LabeledSet& set, std::span<const int> class_ids) {
  if (class_ids.size() != static_cast<std::size_t>(set.num_classes())) {
    throw InvalidArgument("mask_labels: class id table does not match class count");
  }
  std::vector<int> hidden;
  hidden.reserve(set.labels().size());
  for (int label : set.labels()) hidden.push_back(class_ids[static_cast<std::size_t>(label)]);
  return {UnlabeledSet(set.features()), HiddenLabels(std::move(hidden))};
}

LabeledSet make_gaussian_classes(const Eigen::MatrixXd& means, int per_class,
                                 std::uint64_t seed) {
  if (means.cols() < 1 || means.rows() < 1) throw InvalidArgument("empty class means");
  if (per_class < 1) throw InvalidArgument("per_class must be >= 1");
  const Eigen::Index n = means.rows();
  const int num_classes = static_cast<int>(means.cols());
  Rng rng(seed);
  Eigen::MatrixXd features(n, static_cast<Eigen::Index>(num_classes) * per_class);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(features.cols()));
  Eigen::Index col = 0;
  for (int k = 0; k < num_classes; ++k) {
    for (int s = 0; s < per_class; ++s, ++col) {
      for (Eigen::Index d = 0; d < n; ++d) features(d, col) = means(d, k) + rng.normal();
      labels.push_back(k);
    }
  }
  return LabeledSet(std::move(features), std::move(labels), num_classes);
}

LabeledSet make_blobs(int num_classes, int dim, int per_class, double separation,
                      std::uint64_t seed) {
  if (num_classes < 2) throw InvalidArgument("make_blobs: need K >= 2");
  if (dim < 1) throw InvalidArgument("make_blobs: need n >= 1");
  if (separation < 0.0) throw InvalidArgument("make_blobs: separation must be >= 0");
  if (num_classes > dim) {
    throw InvalidArgument("make_blobs: K = " + std::to_string(num_classes) +
                          " exceeds n = " + std::to_string(dim) +
                          "; basis-direction means need K <= n");
  }
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(dim, num_classes);
  for (int k = 0; k < num_classes; ++k) means(k, k) = separation;
  return make_gaussian_classes(means, per_class, seed);
}

LabeledSet make_paired_blobs(int pairs, int dim, int per_class, double separation,
                             double coupling, std::uint64_t seed) {
  if (pairs < 1) throw InvalidArgument("make_paired_blobs: need at least one pair");
  if (dim < 2 * pairs) throw InvalidArgument("make_paired_blobs: need n >= 2 * pairs");
  if (coupling < -1.0 || coupling > 1.0) {
    throw InvalidArgument("make_paired_blobs: coupling must lie in [-1, 1]");
  }
  const double orth = std::sqrt(1.0 - coupling * coupling);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(dim, 2 * pairs);
  for (int b = 0; b < pairs; ++b) {
    means(b, b) = separation;
    means(b, pairs + b) = separation * coupling;
    means(pairs + b, pairs + b) = separation * orth;
  }
  return make_gaussian_classes(means, per_class, seed);
}

ClassSubset select_classes(const LabeledSet& set, std::span<const int> class_ids) {
  std::vector<int> local(static_cast<std::size_t>(set.num_classes()), -1);
  for (std::size_t j = 0; j < class_ids.size(); ++j) {
    const int id = class_ids[j];
    if (id < 0 || id >= set.num_classes()) {
      throw InvalidArgument("select_classes: class id " + std::to_string(id) + " out of range");
    }
    if (local[static_cast<std::size_t>(id)] != -1) {
      throw InvalidArgument("select_classes: duplicate class id " + std::to_string(id));
    }
    local[static_cast<std::size_t>(id)] = static_cast<int>(j);
  }
  std::vector<Eigen::Index> cols;
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    const int mapped = local[static_cast<std::size_t>(set.labels()[static_cast<std::size_t>(i)])];
    if (mapped >= 0) {
      cols.push_back(i);
      labels.push_back(mapped);
    }
  }
  Eigen::MatrixXd features(set.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    features.col(static_cast<Eigen::Index>(c)) = set.sample(cols[c]);
  }
  return {LabeledSet(std::move(features), std::move(labels), static_cast<int>(class_ids.size())),
          std::vector<int>(class_ids.begin(), class_ids.end())};
}

LabeledSet take(const LabeledSet& set, std::span<const std::size_t> indices) {
  Eigen::MatrixXd features(set.dim(), static_cast<Eigen::Index>(indices.size()));
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= static_cast<std::size_t>(set.size())) {
      throw InvalidArgument("take: index out of range");
    }
    features.col(static_cast<Eigen::Index>(c)) = set.sample(static_cast<Eigen::Index>(indices[c]));
    labels.push_back(set.labels()[indices[c]]);
  }
  return LabeledSet(std::move(features), std::move(labels), set.num_classes());
}

TrainTestSplit split_train_test(const LabeledSet& set, std::size_t train_size,
                                std::size_t test_size, std::uint64_t seed) {
  const auto available = static_cast<std::size_t>(set.size());
  if (train_size + test_size > available) {
    throw InvalidArgument("split needs " + std::to_string(train_size + test_size) +
                          " samples but only " + std::to_string(available) + " are available");
  }
  std::vector<std::size_t> order(available);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  const std::span<const std::size_t> all(order);
  return {take(set, all.subspan(0, train_size)), take(set, all.subspan(train_size, test_size))};
}

}  // namespace cvec
