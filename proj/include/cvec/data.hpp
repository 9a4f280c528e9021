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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cvec {

inline constexpr int kCifarSide = 32;
inline constexpr std::size_t kCifarPlane = 1024;
inline constexpr std::size_t kCifarImageBytes = 3 * kCifarPlane;
inline constexpr std::size_t kCifarRecordBytes = kCifarImageBytes + 1;
inline constexpr int kCifarClasses = 10;

inline constexpr int kFeatureSide = 20;
inline constexpr int kFeatureDim = kFeatureSide * kFeatureSide;

// A 32x32 colour image stored plane by plane: 1024 red intensities, then
// 1024 green, then 1024 blue, each plane row-major.
struct RawImage {
  std::array<std::uint8_t, kCifarImageBytes> planes{};

  std::uint8_t at(int channel, int row, int col) const {
    return planes[static_cast<std::size_t>(channel) * kCifarPlane +
                  static_cast<std::size_t>(row * kCifarSide + col)];
  }
};

struct CifarRecord {
  RawImage image;
  int label = 0;
};

// Parses a CIFAR-10 binary batch. Throws DataError when the length is not a
// multiple of 3073 or a label byte is out of range.
std::vector<CifarRecord> parse_cifar10(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_cifar10(std::span<const CifarRecord> records);
std::vector<CifarRecord> read_cifar10_file(const std::filesystem::path& path);

// Luma, then a pixel-centre bilinear resize to 20x20, scaled to [0, 1] and
// flattened row-major into 400 components.
Eigen::VectorXd extract_features(const RawImage& image);

// Column-per-sample feature matrix (n x N) for a batch of images.
Eigen::MatrixXd extract_features(std::span<const CifarRecord> records);

// Labelled samples. Features are stored as an n x N matrix with one column
// per sample, so the matrix is the X of X X'. Every class in [0, K) must
// have at least one sample.
class LabeledSet {
 public:
  LabeledSet(Eigen::MatrixXd features, std::vector<int> labels, int num_classes);

  const Eigen::MatrixXd& features() const { return features_; }
  std::span<const int> labels() const { return labels_; }
  int num_classes() const { return num_classes_; }
  Eigen::Index dim() const { return features_.rows(); }
  Eigen::Index size() const { return features_.cols(); }
  auto sample(Eigen::Index i) const { return features_.col(i); }

  std::vector<std::size_t> class_counts() const;

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  int num_classes_;
};

// Samples without labels. There is no label accessor: code that
// only sees an UnlabeledSet cannot consult class membership.
class UnlabeledSet {
 public:
  explicit UnlabeledSet(Eigen::MatrixXd features);

  const Eigen::MatrixXd& features() const { return features_; }
  Eigen::Index dim() const { return features_.rows(); }
  Eigen::Index size() const { return features_.cols(); }
  auto sample(Eigen::Index i) const { return features_.col(i); }

 private:
  Eigen::MatrixXd features_;
};

// Labels kept aside while a set is masked. They can only be used to score a
// prediction vector; individual labels are never handed back.
class HiddenLabels {
 public:
  explicit HiddenLabels(std::vector<int> labels);

  std::size_t size() const { return labels_.size(); }

  // Fraction of positions where predicted[i] equals the hidden label.
  double accuracy(std::span<const int> predicted) const;

  // True when any hidden label is one of `ids`.
  bool contains_any(std::span<const int> ids) const;

  // Reorders the hidden labels by `order` (a permutation of 0..size-1),
  // leaving any associated features untouched.
  HiddenLabels permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<int> labels_;
};

struct MaskedSet {
  UnlabeledSet set;
  HiddenLabels labels;
};

// Hides the labels of `set`. Hidden labels are stored as class_ids[label];
// the single-argument form uses the identity mapping.
MaskedSet mask_labels(const LabeledSet& set);
MaskedSet mask_labels(const LabeledSet& set, std::span<const int> class_ids);

// K isotropic unit-variance Gaussian classes centred at separation * e_i.
LabeledSet make_blobs(int num_classes, int dim, int per_class, double separation,
                      std::uint64_t seed);

// Unit-variance Gaussian classes around the given means (n x K, one column
// per class). Samples are emitted class by class.
LabeledSet make_gaussian_classes(const Eigen::MatrixXd& means, int per_class,
                                 std::uint64_t seed);

// 2m classes: class b < m centred at separation * e_b, class m + b centred at
// separation * (coupling * e_b + sqrt(1 - coupling^2) * e_{m+b}). Used to
// build seen/unseen class pairs with a known cosine of `coupling`.
LabeledSet make_paired_blobs(int pairs, int dim, int per_class, double separation,
                             double coupling, std::uint64_t seed);

// A subset of classes relabelled to 0..k-1; class_ids[local] is the original id.
struct ClassSubset {
  LabeledSet set;
  std::vector<int> class_ids;
};

ClassSubset select_classes(const LabeledSet& set, std::span<const int> class_ids);

// Samples picked by index, in the given order, keeping the class count.
LabeledSet take(const LabeledSet& set, std::span<const std::size_t> indices);

struct TrainTestSplit {
  LabeledSet train;
  LabeledSet test;
};

// Shuffles sample indices with `seed` and takes the first train_size for
// training and the following test_size for testing.
TrainTestSplit split_train_test(const LabeledSet& set, std::size_t train_size,
                                std::size_t test_size, std::uint64_t seed);

}  // namespace cvec
