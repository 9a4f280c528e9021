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

#include "cvec/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cvec/io.hpp"

namespace cvec::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_int(const std::string& key, const std::string& value) {
  T out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': '" + value + "' is not a valid integer");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return io::parse_number(value);
  } catch (const DataError&) {
    throw ConfigError("config key '" + key + "': '" + value + "' is not a valid number");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

std::vector<int> parse_ids(const std::string& key, const std::string& value) {
  std::vector<int> ids;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) ids.push_back(parse_int<int>(key, item));
  }
  return ids;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "dataset",      "cifar_dir",       "train_csv",      "test_csv",
      "blob_classes", "blob_dim",        "blob_separation", "blob_coupling",
      "train",        "test",            "zs_samples",     "seen_classes",
      "unseen_classes", "data_seed",     "init_seed",      "beta",
      "iterations",   "ridge",           "window",         "stride",
      "pseudo_beta",  "pseudo_iterations", "pseudo_ridge", "normalize_zp",
      "side_info_r",  "side_info_rho",   "init_weights",   "outdir",
      "run_id"};
  return keys;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "dataset") dataset = value;
  else if (key == "cifar_dir") cifar_dir = value;
  else if (key == "train_csv") train_csv = value;
  else if (key == "test_csv") test_csv = value;
  else if (key == "blob_classes") blob_classes = parse_int<int>(key, value);
  else if (key == "blob_dim") blob_dim = parse_int<int>(key, value);
  else if (key == "blob_separation") blob_separation = parse_real(key, value);
  else if (key == "blob_coupling") blob_coupling = parse_real(key, value);
  else if (key == "train") train = parse_int<std::size_t>(key, value);
  else if (key == "test") test = parse_int<std::size_t>(key, value);
  else if (key == "zs_samples") zs_samples = parse_int<std::size_t>(key, value);
  else if (key == "seen_classes") seen_classes = parse_ids(key, value);
  else if (key == "unseen_classes") unseen_classes = parse_ids(key, value);
  else if (key == "data_seed") data_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "init_seed") init_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "beta") beta = parse_real(key, value);
  else if (key == "iterations") iterations = parse_int<int>(key, value);
  else if (key == "ridge") ridge = parse_real(key, value);
  else if (key == "window") window = parse_int<std::size_t>(key, value);
  else if (key == "stride") stride = parse_int<std::size_t>(key, value);
  else if (key == "pseudo_beta") pseudo_beta = parse_real(key, value);
  else if (key == "pseudo_iterations") pseudo_iterations = parse_int<int>(key, value);
  else if (key == "pseudo_ridge") pseudo_ridge = parse_real(key, value);
  else if (key == "normalize_zp") normalize_zp = parse_bool(key, value);
  else if (key == "side_info_r") side_info_r = value;
  else if (key == "side_info_rho") side_info_rho = value;
  else if (key == "init_weights") init_weights = value;
  else if (key == "outdir") outdir = value;
  else if (key == "run_id") run_id = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  auto real = [](double v) { return io::format_number(v); };
  return {
      {"dataset", dataset},
      {"cifar_dir", cifar_dir},
      {"train_csv", train_csv},
      {"test_csv", test_csv},
      {"blob_classes", std::to_string(blob_classes)},
      {"blob_dim", std::to_string(blob_dim)},
      {"blob_separation", real(blob_separation)},
      {"blob_coupling", real(blob_coupling)},
      {"train", std::to_string(train)},
      {"test", std::to_string(test)},
      {"zs_samples", std::to_string(zs_samples)},
      {"seen_classes", join_ids(seen_classes)},
      {"unseen_classes", join_ids(unseen_classes)},
      {"data_seed", std::to_string(data_seed)},
      {"init_seed", std::to_string(init_seed)},
      {"beta", real(beta)},
      {"iterations", std::to_string(iterations)},
      {"ridge", real(ridge)},
      {"window", std::to_string(window)},
      {"stride", std::to_string(stride)},
      {"pseudo_beta", real(pseudo_beta)},
      {"pseudo_iterations", std::to_string(pseudo_iterations)},
      {"pseudo_ridge", real(pseudo_ridge)},
      {"normalize_zp", normalize_zp ? "true" : "false"},
      {"side_info_r", side_info_r},
      {"side_info_rho", side_info_rho},
      {"init_weights", init_weights},
      {"outdir", outdir},
      {"run_id", run_id},
  };
}

void ExperimentConfig::validate() const {
  if (dataset != "blobs" && dataset != "cifar10" && dataset != "csv") {
    throw ConfigError("dataset must be one of blobs, cifar10, csv (got '" + dataset + "')");
  }
  if (dataset == "cifar10" && cifar_dir.empty()) {
    throw ConfigError("dataset = cifar10 requires cifar_dir");
  }
  if (dataset == "csv" && train_csv.empty()) throw ConfigError("dataset = csv requires train_csv");
  if (blob_classes < 2) throw ConfigError("blob_classes must be >= 2");
  if (blob_dim < 1) throw ConfigError("blob_dim must be >= 1");
  if (blob_separation < 0.0) throw ConfigError("blob_separation must be >= 0");
  if (blob_coupling < -1.0 || blob_coupling > 1.0) {
    throw ConfigError("blob_coupling must lie in [-1, 1]");
  }
  if (train < 1 || test < 1) throw ConfigError("train and test sizes must be >= 1");
  if (!(beta > 0.0) || !(pseudo_beta > 0.0)) throw ConfigError("beta values must be > 0");
  if (iterations < 1 || pseudo_iterations < 1) throw ConfigError("iterations must be >= 1");
  if (ridge < 0.0 || pseudo_ridge < 0.0) throw ConfigError("ridge values must be >= 0");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  for (int id : seen_classes) {
    if (std::find(unseen_classes.begin(), unseen_classes.end(), id) != unseen_classes.end()) {
      throw ConfigError("seen_classes and unseen_classes overlap at class " + std::to_string(id));
    }
  }
}

std::map<std::string, std::string> parse_key_value(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_key_value(in);
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& values) {
  ExperimentConfig config;
  for (const auto& [key, value] : values) config.set(key, value);
  return config;
}

std::string canonical_text(const ExperimentConfig& config) {
  const auto values = config.to_map();
  std::string out;
  for (const auto& key : config_keys()) {
    if (key == "outdir" || key == "run_id") continue;
    out += key + " = " + values.at(key) + "\n";
  }
  return out;
}

std::string effective_run_id(const ExperimentConfig& config) {
  if (!config.run_id.empty()) return config.run_id;
  // FNV-1a, 64 bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("run-") + buf;
}

}  // namespace cvec::harness
