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

#include <array>
#include <string>
#include <vector>

#include "qfrag/circuit.hpp"

namespace qfrag {

inline constexpr std::size_t kNumFeatures = 2 + kNumFeatureGates;

/// Version tag stored with trained models; bump when the column layout changes.
inline constexpr const char* kFeatureSchemaVersion = "qubits-depth-17gates/1";

struct FeatureVector {
  int n_qubits = 0;
  int depth = 0;
  std::array<int, kNumFeatureGates> gate_counts{};

  int total_gates() const;
  std::array<double, kNumFeatures> as_array() const;
  std::vector<double> as_vector() const;

  friend auto operator<=>(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const QuantumCircuit& circuit);

/// Column names in dataset order, without the label column.
const std::array<std::string, kNumFeatures>& feature_column_names();

/// Comma-joined feature columns, no trailing newline.
std::string features_csv_row(const FeatureVector& fv);

}  // namespace qfrag
