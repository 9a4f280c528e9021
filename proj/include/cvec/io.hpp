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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cvec/classifier.hpp"
#include "cvec/monitor.hpp"
#include "cvec/training.hpp"
#include "cvec/zeroshot.hpp"

// CSV interchange formats. Readers skip blank lines and lines starting with
// '#'; writers never emit comments themselves.
namespace cvec::io {

// Shortest decimal representation that round-trips to the same double.
std::string format_number(double value);
double parse_number(std::string_view text);
long long parse_integer(std::string_view text);
std::vector<std::string_view> split_csv_line(std::string_view line);

// label,f0,...,f{n-1}; one row per sample, label -1 when unlabelled.
struct FeatureTable {
  Eigen::MatrixXd features;  // n x N
  std::vector<int> labels;
};
void write_feature_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& features,
                       std::span<const int> labels = {});
FeatureTable read_feature_csv(std::istream& in);

// n rows, K columns with header w0..w{K-1}.
void write_weights_csv(std::ostream& out, const WeightMatrix& w);
WeightMatrix read_weights_csv(std::istream& in);

struct TraceColumns {
  bool loss = true;
  bool e_marker = true;
  bool accuracy = true;
};
// t followed by the selected columns; absent optional values are empty cells.
void write_trace_csv(std::ostream& out, const TrainTrace& trace, TraceColumns columns = {});

// end_index,e_marker,empty_class_count
void write_windowed_csv(std::ostream& out, std::span<const WindowedMarker> markers);

// class,cos_theta,e2 per class, then a summary row e_marker,,<E>.
void write_emarker_report_csv(std::ostream& out, const EMarkerReport& report);

// Header row of unseen ids (first cell empty), then one row per seen id.
void write_correlation_csv(std::ostream& out, const ClassCorrelation& r);
ClassCorrelation read_correlation_csv(std::istream& in);

// from,to pairs of original class ids.
void write_class_map_csv(std::ostream& out, const ClassMap& map);
ClassMap read_class_map_csv(std::istream& in, std::span<const int> seen_ids,
                            std::span<const int> unseen_ids);

struct ZeroShotRow {
  std::string mode;
  std::string rule;
  double accuracy;
};
// mode,rule,accuracy
void write_zeroshot_report_csv(std::ostream& out, std::span<const ZeroShotRow> rows);

}  // namespace cvec::io
