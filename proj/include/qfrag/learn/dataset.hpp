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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qfrag/circuit.hpp"
#include "qfrag/features.hpp"
#include "qfrag/simulator.hpp"

namespace qfrag::learn {

struct DatasetRow {
  FeatureVector features;
  double label = 0.0;  // E_mean percent of noisy vs ideal execution
};

/// Label of circuit i is measured with noise seed mix_seed(noise.seed, i).
std::vector<DatasetRow> build_dataset(const std::vector<QuantumCircuit>& corpus, const NoiseModel& noise,
                                      std::uint64_t shots = 128);

std::string dataset_csv_header();
std::string dataset_to_csv(const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> dataset_from_csv(const std::string& text);
void write_dataset(const std::vector<DatasetRow>& rows, const std::filesystem::path& path);
std::vector<DatasetRow> read_dataset(const std::filesystem::path& path);

Eigen::MatrixXd feature_matrix(const std::vector<DatasetRow>& rows);
Eigen::VectorXd label_vector(const std::vector<DatasetRow>& rows);

/// Seeded shuffle, then the first round(fraction * n) rows train.
std::pair<std::vector<DatasetRow>, std::vector<DatasetRow>> train_test_split(const std::vector<DatasetRow>& rows,
                                                                             double fraction, std::uint64_t seed);

/// Every *.qasm file under `dir`, sorted by path.
std::vector<QuantumCircuit> load_corpus(const std::filesystem::path& dir);

}  // namespace qfrag::learn
