// Copyright 2026 The qfrag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfrag/learn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "qfrag/error.hpp"
#include "qfrag/metrics.hpp"
#include "qfrag/qasm.hpp"

namespace qfrag::learn {

std::vector<DatasetRow> build_dataset(const std::vector<QuantumCircuit>& corpus, const NoiseModel& noise,
                                      std::uint64_t shots) {
  if (corpus.empty()) throw ModelError("cannot build a dataset from an empty corpus");
  if (shots < 1) throw ModelError("shots must be at least 1");
  noise.validate();
  std::vector<DatasetRow> rows;
  rows.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& c = corpus[i];
    NoiseModel nm = noise;
    nm.seed = mix_seed(noise.seed, i);
    const auto ideal = simulate_ideal(c);
    const auto noisy = simulate_noisy(c, nm, shots);
    rows.push_back({extract_features(c), mean_abs_error(ideal, noisy)});
  }
  return rows;
}

std::string dataset_csv_header() {
  std::string h;
  for (const auto& name : feature_column_names()) h += name + ",";
  return h + "error";
}

std::string dataset_to_csv(const std::vector<DatasetRow>& rows) {
  std::string out = dataset_csv_header() + "\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.17g\n", r.label);
    out += features_csv_row(r.features) + buf;
  }
  return out;
}

std::vector<DatasetRow> dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<DatasetRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != dataset_csv_header()) throw ConfigError("dataset header does not match the expected columns");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != kNumFeatures + 1) {
      throw ConfigError("dataset line " + std::to_string(lineno) + ": expected " + std::to_string(kNumFeatures + 1) +
                        " columns");
    }
    DatasetRow r;
    std::vector<int> ints;
    try {
      for (std::size_t k = 0; k < kNumFeatures; ++k) {
        std::size_t used = 0;
        const double v = std::stod(cells[k], &used);
        if (used != cells[k].size() || v < 0 || v != std::floor(v)) throw std::invalid_argument("bad");
        ints.push_back(static_cast<int>(v));
      }
      std::size_t used = 0;
      r.label = std::stod(cells.back(), &used);
      if (used != cells.back().size()) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw ConfigError("dataset line " + std::to_string(lineno) + ": malformed number");
    }
    if (!(r.label >= 0.0) || !std::isfinite(r.label)) {
      throw ConfigError("dataset line " + std::to_string(lineno) + ": label must be a finite nonnegative number");
    }
    r.features.n_qubits = ints[0];
    r.features.depth = ints[1];
    for (std::size_t g = 0; g < kNumFeatureGates; ++g) r.features.gate_counts[g] = ints[2 + g];
    rows.push_back(r);
  }
  if (!header) throw ConfigError("dataset has no header row");
  return rows;
}

void write_dataset(const std::vector<DatasetRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset " + path.string());
  out << dataset_to_csv(rows);
  if (!out) throw ConfigError("failed writing dataset " + path.string());
}

std::vector<DatasetRow> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return dataset_from_csv(ss.str());
}

Eigen::MatrixXd feature_matrix(const std::vector<DatasetRow>& rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kNumFeatures));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto a = rows[i].features.as_array();
    for (std::size_t k = 0; k < kNumFeatures; ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a[k];
  }
  return x;
}

Eigen::VectorXd label_vector(const std::vector<DatasetRow>& rows) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = rows[i].label;
  return y;
}

std::pair<std::vector<DatasetRow>, std::vector<DatasetRow>> train_test_split(const std::vector<DatasetRow>& rows,
                                                                             double fraction, std::uint64_t seed) {
  if (rows.size() < 2) throw ModelError("need at least two rows to split");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ModelError("train fraction must lie strictly between 0 and 1");
  const std::size_t n = rows.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
  auto n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::pair<std::vector<DatasetRow>, std::vector<DatasetRow>> out;
  for (std::size_t i = 0; i < n; ++i) (i < n_train ? out.first : out.second).push_back(rows[order[i]]);
  return out;
}

std::vector<QuantumCircuit> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".qasm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<QuantumCircuit> out;
  for (const auto& f : files) out.push_back(parse_qasm_file(f));
  return out;
}

}  // namespace qfrag::learn
