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

#include "cvec/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "cvec/error.hpp"

namespace cvec::io {

namespace {

// Next non-comment, non-blank line; false at end of input.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return std::string(buf, end);
}

double parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw DataError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void write_feature_csv(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& features,
                       std::span<const int> labels) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(features.cols())) {
    throw InvalidArgument("feature CSV: label count does not match sample count");
  }
  out << "label";
  for (Eigen::Index d = 0; d < features.rows(); ++d) out << ",f" << d;
  out << '\n';
  for (Eigen::Index s = 0; s < features.cols(); ++s) {
    out << (labels.empty() ? -1 : labels[static_cast<std::size_t>(s)]);
    for (Eigen::Index d = 0; d < features.rows(); ++d) {
      out << ',' << format_number(features(d, s));
    }
    out << '\n';
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw DataError("feature CSV is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || trim(header[0]) != "label") {
    throw DataError("feature CSV header must start with 'label'");
  }
  const auto dim = static_cast<Eigen::Index>(header.size() - 1);
  std::vector<double> values;
  FeatureTable table;
  std::size_t row = 0;
  while (next_line(in, line)) {
    ++row;
    const auto cells = split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != dim + 1) {
      throw DataError("feature CSV row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(dim + 1));
    }
    table.labels.push_back(static_cast<int>(parse_integer(cells[0])));
    for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(parse_number(cells[c]));
  }
  table.features = Eigen::Map<Eigen::MatrixXd>(values.data(), dim,
                                              static_cast<Eigen::Index>(table.labels.size()));
  return table;
}

void write_weights_csv(std::ostream& out, const WeightMatrix& w) {
  for (int k = 0; k < w.num_classes(); ++k) out << (k ? "," : "") << 'w' << k;
  out << '\n';
  for (Eigen::Index d = 0; d < w.dim(); ++d) {
    for (int k = 0; k < w.num_classes(); ++k) {
      out << (k ? "," : "") << format_number(w.matrix()(d, k));
    }
    out << '\n';
  }
}

WeightMatrix read_weights_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw DataError("weights CSV is empty");
  const auto header = split_csv_line(line);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (trim(header[k]) != "w" + std::to_string(k)) {
      throw DataError("weights CSV header must be w0..w{K-1}");
    }
  }
  const auto classes = static_cast<Eigen::Index>(header.size());
  std::vector<std::vector<double>> rows;
  while (next_line(in, line)) {
    const auto cells = split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != classes) {
      throw DataError("weights CSV row " + std::to_string(rows.size() + 1) +
                      " has the wrong number of cells");
    }
    auto& row = rows.emplace_back();
    for (auto cell : cells) row.push_back(parse_number(cell));
  }
  Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()), classes);
  for (std::size_t d = 0; d < rows.size(); ++d) {
    for (Eigen::Index k = 0; k < classes; ++k) {
      w(static_cast<Eigen::Index>(d), k) = rows[d][static_cast<std::size_t>(k)];
    }
  }
  return WeightMatrix(std::move(w));
}

void write_trace_csv(std::ostream& out, const TrainTrace& trace, TraceColumns columns) {
  out << 't';
  if (columns.loss) out << ",loss";
  if (columns.e_marker) out << ",e_marker";
  if (columns.accuracy) out << ",accuracy";
  out << '\n';
  auto cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_number(*v);
  };
  for (const auto& rec : trace.records) {
    out << rec.t;
    if (columns.loss) cell(rec.loss);
    if (columns.e_marker) cell(rec.e_marker);
    if (columns.accuracy) cell(rec.accuracy);
    out << '\n';
  }
}

void write_windowed_csv(std::ostream& out, std::span<const WindowedMarker> markers) {
  out << "end_index,e_marker,empty_class_count\n";
  for (const auto& m : markers) {
    out << m.end_index << ',' << format_number(m.report.e_marker) << ','
        << m.report.empty_classes.size() << '\n';
  }
}

void write_emarker_report_csv(std::ostream& out, const EMarkerReport& report) {
  out << "class,cos_theta,e2\n";
  for (Eigen::Index k = 0; k < report.per_class_e2.size(); ++k) {
    out << k << ',' << format_number(report.per_class_cos(k)) << ','
        << format_number(report.per_class_e2(k)) << '\n';
  }
  out << "e_marker,," << format_number(report.e_marker) << '\n';
}

void write_correlation_csv(std::ostream& out, const ClassCorrelation& r) {
  for (int id : r.unseen_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index a = 0; a < r.values.rows(); ++a) {
    out << r.seen_ids[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < r.values.cols(); ++b) out << ',' << format_number(r.values(a, b));
    out << '\n';
  }
}

ClassCorrelation read_correlation_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw DataError("correlation CSV is empty");
  ClassCorrelation r;
  const auto header = split_csv_line(line);
  for (std::size_t c = 1; c < header.size(); ++c) {
    r.unseen_ids.push_back(static_cast<int>(parse_integer(header[c])));
  }
  std::vector<double> values;
  while (next_line(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw DataError("correlation CSV row width mismatch");
    r.seen_ids.push_back(static_cast<int>(parse_integer(cells[0])));
    for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(parse_number(cells[c]));
  }
  r.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(r.seen_ids.size()),
      static_cast<Eigen::Index>(r.unseen_ids.size()));
  r.validate();
  return r;
}

void write_class_map_csv(std::ostream& out, const ClassMap& map) {
  out << "from,to\n";
  for (std::size_t a = 0; a < map.target.size(); ++a) {
    out << map.seen_ids[a] << ',' << map.unseen_ids[static_cast<std::size_t>(map.target[a])]
        << '\n';
  }
}

ClassMap read_class_map_csv(std::istream& in, std::span<const int> seen_ids,
                            std::span<const int> unseen_ids) {
  std::string line;
  if (!next_line(in, line)) throw DataError("class map CSV is empty");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || trim(header[0]) != "from" || trim(header[1]) != "to") {
    throw DataError("class map CSV header must be 'from,to'");
  }
  ClassMap map{std::vector<int>(seen_ids.size(), -1), {seen_ids.begin(), seen_ids.end()},
               {unseen_ids.begin(), unseen_ids.end()}};
  auto index_of = [](std::span<const int> ids, int id) -> int {
    const auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
  };
  while (next_line(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw DataError("class map CSV rows must have two cells");
    const int from = index_of(seen_ids, static_cast<int>(parse_integer(cells[0])));
    const int to = index_of(unseen_ids, static_cast<int>(parse_integer(cells[1])));
    if (from < 0 || to < 0) throw DataError("class map CSV names an unknown class: " + line);
    if (map.target[static_cast<std::size_t>(from)] != -1) {
      throw DataError("class map CSV maps a class twice: " + line);
    }
    map.target[static_cast<std::size_t>(from)] = to;
  }
  map.validate();
  return map;
}

void write_zeroshot_report_csv(std::ostream& out, std::span<const ZeroShotRow> rows) {
  out << "mode,rule,accuracy\n";
  for (const auto& row : rows) {
    out << row.mode << ',' << row.rule << ',' << format_number(row.accuracy) << '\n';
  }
}

}  // namespace cvec::io
