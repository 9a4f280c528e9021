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

#include "cvec/harness/commands.hpp"

#include <cmath>
#include <fstream>

#include "cvec/harness/dataset.hpp"
#include "cvec/harness/svg.hpp"
#include "cvec/io.hpp"
#include "cvec/monitor.hpp"
#include "cvec/selflearn.hpp"

#ifndef CVEC_VERSION
#define CVEC_VERSION "dev"
#endif

namespace cvec::harness {

namespace fs = std::filesystem;

namespace {

std::string seed_line(const ExperimentConfig& config) {
  return "data_seed=" + std::to_string(config.data_seed) +
         " init_seed=" + std::to_string(config.init_seed);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

// CSV outputs start with a '#' line recording both seeds.
std::ofstream open_csv(const fs::path& dir, const std::string& name,
                       const ExperimentConfig& config) {
  auto out = open_output(dir / name);
  out << "# " << seed_line(config) << '\n';
  return out;
}

void write_chart(const fs::path& dir, const std::string& name, const LineChart& chart,
                 const ExperimentConfig& config) {
  auto out = open_output(dir / name);
  write_svg(out, chart, seed_line(config));
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const ExperimentConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  auto out = open_output(dir / "manifest");
  out << "# cvec run manifest\n";
  out << "version = " << CVEC_VERSION << '\n';
  out << "command = " << command << '\n';
  out << "run_id = " << effective_run_id(config) << '\n';
  out << "data_seed = " << config.data_seed << '\n';
  out << "init_seed = " << config.init_seed << '\n';
  for (const auto& [key, value] : extra) out << key << " = " << value << '\n';
  out << "# configuration\n" << canonical_text(config);
}

WeightMatrix gd_start(const ExperimentConfig& config, const LabeledSet& train) {
  if (config.init_weights.empty()) {
    return random_weights(train.dim(), train.num_classes(), config.init_seed);
  }
  std::ifstream in(config.init_weights);
  if (!in) throw DataError("cannot open init_weights " + config.init_weights);
  return io::read_weights_csv(in);
}

std::vector<double> column(const TrainTrace& trace, std::optional<double> TraceRecord::*field) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    out.push_back((rec.*field).value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return out;
}

std::vector<double> steps(const TrainTrace& trace) {
  std::vector<double> out;
  for (const auto& rec : trace.records) out.push_back(rec.t);
  return out;
}

void write_weights(const fs::path& dir, const std::string& name, const WeightMatrix& w,
                   const ExperimentConfig& config) {
  auto out = open_csv(dir, name, config);
  io::write_weights_csv(out, w);
}

}  // namespace

fs::path run_directory(const ExperimentConfig& config, const std::string& command) {
  const fs::path dir = fs::path(config.outdir) / command / effective_run_id(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(x[i]) && std::isfinite(y[i])) sx += x[i], sy += y[i], ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = sx / count;
  const double my = sy / count;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

PrepareReport cmd_prepare(const ExperimentConfig& config) {
  config.validate();
  const auto split = load_train_test(config);
  const fs::path dir = run_directory(config, "prepare");
  {
    auto out = open_csv(dir, "train.csv", config);
    io::write_feature_csv(out, split.train.features(), split.train.labels());
  }
  {
    auto out = open_csv(dir, "test.csv", config);
    io::write_feature_csv(out, split.test.features(), split.test.labels());
  }
  {
    auto out = open_csv(dir, "test_masked.csv", config);
    io::write_feature_csv(out, split.test.features());
  }
  write_manifest(dir, "prepare", config);
  return {dir, static_cast<std::size_t>(split.train.size()),
          static_cast<std::size_t>(split.test.size())};
}

DirectCompareReport cmd_direct_compare(const ExperimentConfig& config) {
  config.validate();
  const auto split = load_train_test(config);
  const ClassMeans means = class_mean_vectors(split.train);

  const WeightMatrix w_means = weights_from_means(means);
  const WeightMatrix w_lin = weights_linearized(split.train, config.ridge);
  GdConfig gd{config.beta, config.iterations, gd_start(config, split.train)};
  const GdResult trained = train_gd(split.train, gd);
  const WeightMatrix w_random =
      random_weights(split.train.dim(), split.train.num_classes(), config.init_seed);

  DirectCompareReport report;
  report.dir = run_directory(config, "direct-compare");
  report.rows = {
      {"means", accuracy(w_means, split.test), cross_entropy(w_means, split.train)},
      {"linearized", accuracy(w_lin, split.test), cross_entropy(w_lin, split.train)},
      {"gradient_descent", accuracy(trained.weights, split.test),
       cross_entropy(trained.weights, split.train)},
  };
  report.random_weights_loss = cross_entropy(w_random, split.train);

  {
    auto out = open_csv(report.dir, "methods.csv", config);
    out << "method,accuracy,train_loss\n";
    for (const auto& row : report.rows) {
      out << row.method << ',' << io::format_number(row.accuracy) << ','
          << io::format_number(row.train_loss) << '\n';
    }
  }
  {
    auto out = open_csv(report.dir, "reference_loss.csv", config);
    out << "weights,train_loss\nrandom," << io::format_number(report.random_weights_loss) << '\n';
  }
  {
    auto out = open_csv(report.dir, "gd_trace.csv", config);
    io::write_trace_csv(out, trained.trace, {true, false, false});
  }
  write_weights(report.dir, "weights_means.csv", w_means, config);
  write_weights(report.dir, "weights_linearized.csv", w_lin, config);
  write_weights(report.dir, "weights_gd.csv", trained.weights, config);
  write_manifest(report.dir, "direct-compare", config);
  return report;
}

MonitorRunReport cmd_monitor_run(const ExperimentConfig& config) {
  config.validate();
  const auto split = load_train_test(config);
  const MaskedSet masked = mask_labels(split.test);
  GdConfig gd{config.beta, config.iterations, gd_start(config, split.train)};
  const GdResult trained = train_gd(split.train, gd, &masked.set, &masked.labels);

  MonitorRunReport report;
  report.dir = run_directory(config, "monitor-run");
  report.trace = trained.trace;
  const auto& recs = trained.trace.records;
  const double p0 = *recs.front().accuracy;
  const double e0 = *recs.front().e_marker;
  for (const auto& rec : recs) {
    report.log_accuracy_ratio.push_back(std::log(*rec.accuracy / p0));
    report.neg_log_marker_ratio.push_back(-std::log(*rec.e_marker / e0));
  }
  report.correlation = pearson(report.log_accuracy_ratio, report.neg_log_marker_ratio);

  auto cell = [](double v) { return std::isfinite(v) ? io::format_number(v) : std::string(); };
  {
    auto out = open_csv(report.dir, "trace.csv", config);
    io::write_trace_csv(out, trained.trace);
  }
  {
    auto out = open_csv(report.dir, "loss_emarker.csv", config);
    out << "t,loss,e_marker\n";
    for (const auto& rec : recs) {
      out << rec.t << ',' << io::format_number(*rec.loss) << ','
          << io::format_number(*rec.e_marker) << '\n';
    }
  }
  {
    auto out = open_csv(report.dir, "tracking.csv", config);
    out << "t,log_accuracy_ratio,neg_log_emarker_ratio\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
      out << recs[i].t << ',' << cell(report.log_accuracy_ratio[i]) << ','
          << cell(report.neg_log_marker_ratio[i]) << '\n';
    }
  }
  {
    auto out = open_csv(report.dir, "tracking_summary.csv", config);
    out << "pearson_correlation\n" << cell(report.correlation) << '\n';
  }
  {
    const ClassMeans means = class_mean_vectors(split.train);
    auto out = open_csv(report.dir, "emarker_report.csv", config);
    io::write_emarker_report_csv(out, evaluate_e_marker(trained.weights, means, masked.set));
    if (static_cast<std::size_t>(masked.set.size()) >= config.window &&
        config.window >= static_cast<std::size_t>(means.num_classes())) {
      auto wout = open_csv(report.dir, "windowed.csv", config);
      io::write_windowed_csv(wout, windowed_e_marker(trained.weights, means, masked.set.features(),
                                                     {config.window, config.stride}));
    }
  }

  const auto t = steps(trained.trace);
  write_chart(report.dir, "loss_emarker.svg",
              {"Loss and E-Marker during gradient descent", "iteration", "value",
               {{"E-Marker E(S,t)", t, column(trained.trace, &TraceRecord::e_marker)},
                {"loss F(T,t) / F(T,0)", t, [&] {
                   std::vector<double> v = column(trained.trace, &TraceRecord::loss);
                   const double f0 = v.front();
                   for (auto& x : v) x /= f0;
                   return v;
                 }()}}},
              config);
  write_chart(report.dir, "tracking.svg",
              {"Accuracy vs E-Marker tracking", "iteration", "log ratio",
               {{"ln(P/P0)", t, report.log_accuracy_ratio},
                {"-ln(E/E0)", t, report.neg_log_marker_ratio}}},
              config);
  write_weights(report.dir, "weights.csv", trained.weights, config);
  write_manifest(report.dir, "monitor-run", config,
                 {{"pearson_correlation", cell(report.correlation)}});
  return report;
}

SelflearnReport cmd_selflearn(const ExperimentConfig& config) {
  config.validate();
  const auto split = load_train_test(config);
  const MaskedSet masked = mask_labels(split.test);
  const ClassMeans means = class_mean_vectors(split.train);

  const std::vector<std::pair<std::string, PseudoGdInit>> inits{
      {"minimum_distance", MinimumDistanceInit{}},
      {"linearization", LinearizationInit{config.pseudo_ridge}},
      {"random", RandomInit{config.init_seed}},
  };

  SelflearnReport report;
  report.dir = run_directory(config, "selflearn");
  for (const auto& [name, init] : inits) {
    PseudoGdConfig pgd{config.pseudo_beta, config.pseudo_iterations, init, config.normalize_zp};
    auto result = pseudo_gd(means, masked.set, pgd, &masked.labels);
    auto out = open_csv(report.dir, "trace_" + name + ".csv", config);
    io::write_trace_csv(out, result.trace, {false, true, true});
    write_weights(report.dir, "weights_" + name + ".csv", result.weights, config);
    report.runs.push_back({name, result.trace, predict_all(result.weights, masked.set.features())});
  }

  for (std::size_t a = 0; a < report.runs.size(); ++a) {
    for (std::size_t b = a + 1; b < report.runs.size(); ++b) {
      const auto& ra = report.runs[a];
      const auto& rb = report.runs[b];
      std::size_t same = 0;
      for (std::size_t i = 0; i < ra.predictions.size(); ++i) {
        same += ra.predictions[i] == rb.predictions[i];
      }
      report.agreement.push_back(
          {ra.init, rb.init,
           std::abs(*ra.trace.records.back().e_marker - *rb.trace.records.back().e_marker),
           std::abs(*ra.trace.records.back().accuracy - *rb.trace.records.back().accuracy),
           static_cast<double>(same) / static_cast<double>(ra.predictions.size())});
    }
  }
  {
    auto out = open_csv(report.dir, "agreement.csv", config);
    out << "init_a,init_b,e_marker_diff,accuracy_diff,prediction_agreement\n";
    for (const auto& p : report.agreement) {
      out << p.first << ',' << p.second << ',' << io::format_number(p.e_marker_diff) << ','
          << io::format_number(p.accuracy_diff) << ','
          << io::format_number(p.prediction_agreement) << '\n';
    }
  }

  LineChart marker_chart{"E-Marker under pseudo-gradient descent", "iteration", "E-Marker", {}};
  LineChart acc_chart{"Accuracy under pseudo-gradient descent (labels unmasked)", "iteration",
                      "accuracy", {}};
  for (const auto& run : report.runs) {
    const auto t = steps(run.trace);
    marker_chart.series.push_back({run.init, t, column(run.trace, &TraceRecord::e_marker)});
    acc_chart.series.push_back({run.init, t, column(run.trace, &TraceRecord::accuracy)});
  }
  write_chart(report.dir, "emarker.svg", marker_chart, config);
  write_chart(report.dir, "accuracy.svg", acc_chart, config);
  write_manifest(report.dir, "selflearn", config);
  return report;
}

ZeroshotCommandReport cmd_zeroshot(const ExperimentConfig& config) {
  config.validate();
  const LabeledSet pool = load_zeroshot_pool(config);
  const ClassSubset seen = select_classes(pool, config.seen_classes);
  const ClassSubset unseen = select_classes(pool, config.unseen_classes);
  const MaskedSet masked = mask_labels(unseen.set, unseen.class_ids);

  ZeroshotCommandReport report;
  std::string r_source = "cosine of seen and unseen C-vectors (uses unseen-class labels)";
  std::string rho_source = "max-total-correlation bijection over R";
  if (config.side_info_r.empty()) {
    report.side.correlation = class_correlation(class_mean_vectors(seen.set), seen.class_ids,
                                                class_mean_vectors(unseen.set), unseen.class_ids);
  } else {
    std::ifstream in(config.side_info_r);
    if (!in) throw DataError("cannot open side_info_r " + config.side_info_r);
    report.side.correlation = io::read_correlation_csv(in);
    r_source = config.side_info_r;
  }
  if (config.side_info_rho.empty()) {
    report.side.map = class_map(report.side.correlation);
  } else {
    std::ifstream in(config.side_info_rho);
    if (!in) throw DataError("cannot open side_info_rho " + config.side_info_rho);
    report.side.map = io::read_class_map_csv(in, seen.class_ids, unseen.class_ids);
    rho_source = config.side_info_rho;
  }

  ZeroShotConfig zs;
  zs.pseudo = {config.pseudo_beta, config.pseudo_iterations, MinimumDistanceInit{},
               config.normalize_zp};
  for (ZeroShotMode mode : {ZeroShotMode::kMeansOnly, ZeroShotMode::kPseudoGd}) {
    zs.mode = mode;
    report.results.push_back(
        run_zeroshot_experiment(seen, masked.set, masked.labels, report.side, zs));
  }

  report.dir = run_directory(config, "zeroshot");
  std::vector<io::ZeroShotRow> rows;
  for (const auto& r : report.results) {
    rows.push_back({to_string(r.mode), "R", r.accuracy_R});
    rows.push_back({to_string(r.mode), "rho", r.accuracy_rho});
  }
  {
    auto out = open_csv(report.dir, "report.csv", config);
    io::write_zeroshot_report_csv(out, rows);
  }
  {
    auto out = open_csv(report.dir, "correlation.csv", config);
    io::write_correlation_csv(out, report.side.correlation);
  }
  {
    auto out = open_csv(report.dir, "class_map.csv", config);
    io::write_class_map_csv(out, report.side.map);
  }
  write_manifest(report.dir, "zeroshot", config,
                 {{"side_info_r_source", r_source}, {"side_info_rho_source", rho_source}});
  return report;
}

}  // namespace cvec::harness
