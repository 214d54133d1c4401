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

#include <cstdint>
#include <random>
#include <vector>

#include "qfrag/circuit.hpp"

namespace qfrag {

struct RandomCircuitOptions {
  int n_qubits = 4;
  int n_gates = 20;
  /// Fraction of gates drawn from the multi-qubit kinds.
  double multi_qubit_fraction = 0.35;
  /// Draw from every feature kind when empty.
  std::vector<GateKind> kinds;
};

/// Random circuit over the feature gate set with uniformly drawn operands
/// and angles in [-pi, pi).
QuantumCircuit random_circuit(const RandomCircuitOptions& options, std::mt19937_64& rng);

struct CorpusOptions {
  int count = 60;
  int min_qubits = 3;
  int max_qubits = 6;
  int min_gates = 8;
  int max_gates = 40;
  std::uint64_t seed = 0;
};

/// Circuits named rand000, rand001, ... with uniformly drawn widths and
/// gate counts.
std::vector<QuantumCircuit> random_corpus(const CorpusOptions& options);

}  // namespace qfrag
