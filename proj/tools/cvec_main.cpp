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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cvec/error.hpp"
#include "cvec/harness/commands.hpp"
#include "cvec/harness/config.hpp"
#include "cvec/io.hpp"

namespace {

using cvec::harness::ExperimentConfig;

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kNumerical = 4 };

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return s;
}

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << "error code=" << code << " kind=" << kind << " message=\"" << one_line(message)
            << "\"\n";
  return code;
}

std::string fmt(double v) { return cvec::io::format_number(v); }

void print(const cvec::harness::DirectCompareReport& r) {
  std::cout << "method,accuracy,train_loss\n";
  for (const auto& row : r.rows) {
    std::cout << row.method << ',' << fmt(row.accuracy) << ',' << fmt(row.train_loss) << '\n';
  }
  std::cout << "random_weights_train_loss," << fmt(r.random_weights_loss) << '\n';
  std::cout << "output: " << r.dir.string() << '\n';
}

void print(const cvec::harness::MonitorRunReport& r) {
  const auto& first = r.trace.records.front();
  const auto& last = r.trace.records.back();
  std::cout << "t,loss,e_marker,accuracy\n";
  for (const auto* rec : {&first, &last}) {
    std::cout << rec->t << ',' << fmt(*rec->loss) << ',' << fmt(*rec->e_marker) << ','
              << fmt(*rec->accuracy) << '\n';
  }
  std::cout << "pearson_correlation," << fmt(r.correlation) << '\n';
  std::cout << "output: " << r.dir.string() << '\n';
}

void print(const cvec::harness::SelflearnReport& r) {
  std::cout << "init,final_e_marker,final_accuracy\n";
  for (const auto& run : r.runs) {
    const auto& last = run.trace.records.back();
    std::cout << run.init << ',' << fmt(*last.e_marker) << ',' << fmt(*last.accuracy) << '\n';
  }
  for (const auto& p : r.agreement) {
    std::cout << p.first << " vs " << p.second << ": e_marker_diff=" << fmt(p.e_marker_diff)
              << " accuracy_diff=" << fmt(p.accuracy_diff)
              << " prediction_agreement=" << fmt(p.prediction_agreement) << '\n';
  }
  std::cout << "output: " << r.dir.string() << '\n';
}

void print(const cvec::harness::ZeroshotCommandReport& r) {
  std::cout << "mode,rule,accuracy\n";
  for (const auto& res : r.results) {
    std::cout << cvec::to_string(res.mode) << ",R," << fmt(res.accuracy_R) << '\n';
    std::cout << cvec::to_string(res.mode) << ",rho," << fmt(res.accuracy_rho) << '\n';
  }
  std::cout << "output: " << r.dir.string() << '\n';
}

void print(const cvec::harness::PrepareReport& r) {
  std::cout << "train," << r.train_count << "\ntest," << r.test_count << '\n';
  std::cout << "output: " << r.dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-mean-vector classifiers: direct weights, E-Marker monitoring, "
               "pseudo-gradient self-learning and zero-shot transfer"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> flags;
  };
  std::vector<Command> commands{
      {"prepare", "Extract features and write train/test feature CSVs"},
      {"direct-compare", "Compare mean-vector, linearised and gradient-descent weights"},
      {"monitor-run", "Gradient descent with E-Marker tracking on a masked test set"},
      {"selflearn", "Pseudo-gradient descent from three initialisations"},
      {"zeroshot", "Zero-shot transfer from seen to unseen classes"},
  };
  for (auto& cmd : commands) {
    cmd.app = app.add_subcommand(cmd.name, cmd.help);
    cmd.app->add_option("--config", cmd.config_path, "key = value configuration file");
    for (const auto& key : cvec::harness::config_keys()) {
      cmd.app->add_option("--" + key, cmd.flags[key], "override config key " + key);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    return fail(kConfig, "config", e.what());
  }

  try {
    for (auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      std::map<std::string, std::string> values;
      if (!cmd.config_path.empty()) values = cvec::harness::read_key_value_file(cmd.config_path);
      for (const auto& key : cvec::harness::config_keys()) {
        if (cmd.app->count("--" + key) > 0) values[key] = cmd.flags[key];
      }
      const ExperimentConfig config = cvec::harness::config_from_map(values);
      const std::string name = cmd.name;
      if (name == "prepare") print(cvec::harness::cmd_prepare(config));
      else if (name == "direct-compare") print(cvec::harness::cmd_direct_compare(config));
      else if (name == "monitor-run") print(cvec::harness::cmd_monitor_run(config));
      else if (name == "selflearn") print(cvec::harness::cmd_selflearn(config));
      else if (name == "zeroshot") print(cvec::harness::cmd_zeroshot(config));
    }
  } catch (const cvec::InvalidArgument& e) {
    return fail(kConfig, "config", e.what());
  } catch (const cvec::DataError& e) {
    return fail(kData, "data", e.what());
  } catch (const cvec::NumericalError& e) {
    return fail(kNumerical, "numerical", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
  return kOk;
}
