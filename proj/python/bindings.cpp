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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "cvec/classifier.hpp"
#include "cvec/data.hpp"
#include "cvec/error.hpp"
#include "cvec/monitor.hpp"
#include "cvec/selflearn.hpp"
#include "cvec/training.hpp"
#include "cvec/zeroshot.hpp"

namespace py = pybind11;

// Python callers pass samples as rows (N x n); the library stores one
// sample per column, so arrays are transposed at the boundary.
namespace {

using RowSamples = Eigen::Ref<const Eigen::MatrixXd>;

cvec::LabeledSet labeled(const RowSamples& x, const std::vector<int>& y, int num_classes) {
  return cvec::LabeledSet(x.transpose(), y, num_classes);
}

cvec::UnlabeledSet unlabeled(const RowSamples& x) { return cvec::UnlabeledSet(x.transpose()); }

cvec::ClassMeans means_from(const Eigen::MatrixXd& c) {
  return cvec::ClassMeans(c, std::vector<std::size_t>(static_cast<std::size_t>(c.cols()), 0));
}

py::dict trace_dict(const cvec::TrainTrace& trace) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> t;
  std::vector<double> loss, marker, acc;
  for (const auto& r : trace.records) {
    t.push_back(r.t);
    loss.push_back(r.loss.value_or(nan));
    marker.push_back(r.e_marker.value_or(nan));
    acc.push_back(r.accuracy.value_or(nan));
  }
  py::dict d;
  d["t"] = t;
  d["loss"] = loss;
  d["e_marker"] = marker;
  d["accuracy"] = acc;
  return d;
}

py::dict report_dict(const cvec::EMarkerReport& r) {
  py::dict d;
  d["per_class_e2"] = r.per_class_e2;
  d["per_class_cos"] = r.per_class_cos;
  d["e_marker"] = r.e_marker;
  d["empty_classes"] = r.empty_classes;
  return d;
}

cvec::PseudoGdInit pseudo_init(const std::string& name, double ridge, std::uint64_t seed) {
  if (name == "minimum_distance") return cvec::MinimumDistanceInit{};
  if (name == "linearization") return cvec::LinearizationInit{ridge};
  if (name == "random") return cvec::RandomInit{seed};
  throw cvec::InvalidArgument("init must be minimum_distance, linearization or random");
}

}  // namespace

PYBIND11_MODULE(_cvec, m) {
  m.doc() = "Class-mean-vector methods for one-layer softmax classifiers";

  auto error = py::register_exception<cvec::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<cvec::InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<cvec::DataError>(m, "DataError", error.ptr());
  py::register_exception<cvec::NumericalError>(m, "NumericalError", error.ptr());

  m.def(
      "parse_cifar10",
      [](const py::bytes& data) {
        const std::string raw = data;
        const auto records = cvec::parse_cifar10(
            {reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
        py::array_t<std::uint8_t> images({records.size(), cvec::kCifarImageBytes});
        std::vector<int> labels;
        auto view = images.mutable_unchecked<2>();
        for (std::size_t r = 0; r < records.size(); ++r) {
          for (std::size_t i = 0; i < cvec::kCifarImageBytes; ++i) {
            view(r, i) = records[r].image.planes[i];
          }
          labels.push_back(records[r].label);
        }
        return py::make_tuple(images, labels);
      },
      py::arg("data"), "Parse a CIFAR-10 binary batch into (images[N, 3072], labels).");

  m.def(
      "extract_features",
      [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> image) {
        if (image.size() != static_cast<py::ssize_t>(cvec::kCifarImageBytes)) {
          throw cvec::InvalidArgument("image must have 3072 intensities");
        }
        cvec::RawImage raw;
        std::copy(image.data(), image.data() + image.size(), raw.planes.begin());
        return cvec::extract_features(raw);
      },
      py::arg("image"), "400-dim luma/bilinear feature vector of a plane-ordered image.");

  m.def(
      "make_blobs",
      [](int k, int n, int per_class, double separation, std::uint64_t seed) {
        const auto set = cvec::make_blobs(k, n, per_class, separation, seed);
        return py::make_tuple(Eigen::MatrixXd(set.features().transpose()),
                              std::vector<int>(set.labels().begin(), set.labels().end()));
      },
      py::arg("num_classes"), py::arg("dim"), py::arg("per_class"), py::arg("separation"),
      py::arg("seed"));

  m.def(
      "class_mean_vectors",
      [](const RowSamples& x, const std::vector<int>& y, int k) {
        return cvec::class_mean_vectors(labeled(x, y, k)).columns();
      },
      py::arg("x"), py::arg("y"), py::arg("num_classes"));

  m.def(
      "posterior",
      [](const Eigen::MatrixXd& w, const Eigen::VectorXd& x) {
        return cvec::posterior(cvec::WeightMatrix(w), x);
      },
      py::arg("w"), py::arg("x"));
  m.def(
      "posteriors",
      [](const Eigen::MatrixXd& w, const RowSamples& x) {
        return cvec::posteriors(cvec::WeightMatrix(w), x.transpose());
      },
      py::arg("w"), py::arg("x"));
  m.def(
      "predict",
      [](const Eigen::MatrixXd& w, const RowSamples& x) {
        return cvec::predict_all(cvec::WeightMatrix(w), x.transpose());
      },
      py::arg("w"), py::arg("x"));
  m.def(
      "cross_entropy",
      [](const Eigen::MatrixXd& w, const RowSamples& x, const std::vector<int>& y) {
        return cvec::cross_entropy(cvec::WeightMatrix(w), labeled(x, y, static_cast<int>(w.cols())));
      },
      py::arg("w"), py::arg("x"), py::arg("y"));
  m.def(
      "accuracy",
      [](const Eigen::MatrixXd& w, const RowSamples& x, const std::vector<int>& y) {
        return cvec::accuracy(cvec::WeightMatrix(w), labeled(x, y, static_cast<int>(w.cols())));
      },
      py::arg("w"), py::arg("x"), py::arg("y"));
  m.def(
      "gradient",
      [](const Eigen::MatrixXd& w, const RowSamples& x, const std::vector<int>& y) {
        return cvec::gradient(cvec::WeightMatrix(w), labeled(x, y, static_cast<int>(w.cols())));
      },
      py::arg("w"), py::arg("x"), py::arg("y"), "Ascent direction C - X P.");

  m.def(
      "weights_from_means",
      [](const Eigen::MatrixXd& c) { return cvec::weights_from_means(means_from(c)).matrix(); },
      py::arg("c"));
  m.def(
      "weights_linearized",
      [](const RowSamples& x, const std::vector<int>& y, int k, double ridge) {
        return cvec::weights_linearized(labeled(x, y, k), ridge).matrix();
      },
      py::arg("x"), py::arg("y"), py::arg("num_classes"), py::arg("ridge") = 0.0);

  m.def(
      "train_gd",
      [](const RowSamples& x, const std::vector<int>& y, int k, double beta, int iterations,
         std::optional<std::uint64_t> seed, std::optional<Eigen::MatrixXd> monitor_x,
         std::optional<std::vector<int>> monitor_y) {
        const auto train = labeled(x, y, k);
        cvec::GdConfig config{beta, iterations, cvec::ZeroInit{}};
        if (seed) config.init = cvec::RandomInit{*seed};
        std::optional<cvec::UnlabeledSet> monitor;
        std::optional<cvec::HiddenLabels> hidden;
        if (monitor_x) monitor.emplace(monitor_x->transpose());
        if (monitor_y) hidden.emplace(*monitor_y);
        const auto result = cvec::train_gd(train, config, monitor ? &*monitor : nullptr,
                                           hidden ? &*hidden : nullptr);
        return py::make_tuple(result.weights.matrix(), trace_dict(result.trace));
      },
      py::arg("x"), py::arg("y"), py::arg("num_classes"), py::arg("beta") = 0.003,
      py::arg("iterations") = 400, py::arg("seed") = py::none(),
      py::arg("monitor_x") = py::none(), py::arg("monitor_y") = py::none());

  m.def(
      "e_marker",
      [](const Eigen::MatrixXd& c, const Eigen::MatrixXd& w, const RowSamples& s) {
        return report_dict(
            cvec::evaluate_e_marker(cvec::WeightMatrix(w), means_from(c), unlabeled(s)));
      },
      py::arg("c"), py::arg("w"), py::arg("s"));

  m.def(
      "windowed_e_marker",
      [](const Eigen::MatrixXd& w, const Eigen::MatrixXd& c, const RowSamples& stream,
         std::size_t window, std::size_t stride) {
        const auto markers = cvec::windowed_e_marker(cvec::WeightMatrix(w), means_from(c),
                                                     stream.transpose(), {window, stride});
        std::vector<std::pair<std::size_t, double>> out;
        for (const auto& mk : markers) out.emplace_back(mk.end_index, mk.report.e_marker);
        return out;
      },
      py::arg("w"), py::arg("c"), py::arg("stream"), py::arg("window") = 500,
      py::arg("stride") = 100);

  m.def(
      "pseudo_gd",
      [](const Eigen::MatrixXd& c, const RowSamples& s, double beta, int iterations,
         const std::string& init, double ridge, std::uint64_t seed, bool normalize_zp,
         std::optional<std::vector<int>> labels) {
        cvec::PseudoGdConfig config{beta, iterations, pseudo_init(init, ridge, seed), normalize_zp};
        std::optional<cvec::HiddenLabels> hidden;
        if (labels) hidden.emplace(*labels);
        const auto result =
            cvec::pseudo_gd(means_from(c), unlabeled(s), config, hidden ? &*hidden : nullptr);
        return py::make_tuple(result.weights.matrix(), trace_dict(result.trace));
      },
      py::arg("c"), py::arg("s"), py::arg("beta") = 0.003, py::arg("iterations") = 200,
      py::arg("init") = "minimum_distance", py::arg("ridge") = 0.0, py::arg("seed") = 0,
      py::arg("normalize_zp") = false, py::arg("labels") = py::none());

  m.def(
      "class_correlation",
      [](const Eigen::MatrixXd& seen, const Eigen::MatrixXd& unseen) {
        std::vector<int> a(static_cast<std::size_t>(seen.cols()));
        std::vector<int> b(static_cast<std::size_t>(unseen.cols()));
        std::iota(a.begin(), a.end(), 0);
        std::iota(b.begin(), b.end(), 0);
        return cvec::class_correlation(means_from(seen), a, means_from(unseen), b).values;
      },
      py::arg("c_seen"), py::arg("c_unseen"));

  m.def(
      "class_map",
      [](const Eigen::MatrixXd& r) {
        std::vector<int> a(static_cast<std::size_t>(r.rows()));
        std::vector<int> b(static_cast<std::size_t>(r.cols()));
        std::iota(a.begin(), a.end(), 0);
        std::iota(b.begin(), b.end(), 0);
        return cvec::class_map({r, a, b}).target;
      },
      py::arg("r"), "Max-total-correlation bijection; entry a is the column chosen for row a.");
}
