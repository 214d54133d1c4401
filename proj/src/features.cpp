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

#include "qfrag/features.hpp"

#include <numeric>

namespace qfrag {

int FeatureVector::total_gates() const { return std::accumulate(gate_counts.begin(), gate_counts.end(), 0); }

std::array<double, kNumFeatures> FeatureVector::as_array() const {
  std::array<double, kNumFeatures> out{};
  out[0] = n_qubits;
  out[1] = depth;
  for (std::size_t i = 0; i < kNumFeatureGates; ++i) out[2 + i] = gate_counts[i];
  return out;
}

std::vector<double> FeatureVector::as_vector() const {
  const auto a = as_array();
  return {a.begin(), a.end()};
}

FeatureVector extract_features(const QuantumCircuit& circuit) {
  FeatureVector fv;
  fv.n_qubits = circuit.n_qubits();
  fv.depth = depth(circuit);
  for (const Gate& g : circuit.gates()) {
    if (auto col = feature_column(g.kind)) ++fv.gate_counts[*col];
  }
  return fv;
}

const std::array<std::string, kNumFeatures>& feature_column_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "n_qubits", "depth", "h",  "cnot",    "x",    "y",   "z", "rx",  "ry", "rz",
      "cz",       "cp",    "t",  "toffoli", "swap", "tdg", "s", "sdg", "u3"};
  return names;
}

std::string features_csv_row(const FeatureVector& fv) {
  std::string out;
  const auto a = fv.as_array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(static_cast<long long>(a[i]));
  }
  return out;
}

}  // namespace qfrag
