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

#include "qfrag/random_circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>

#include "qfrag/error.hpp"

namespace qfrag {

QuantumCircuit random_circuit(const RandomCircuitOptions& options, std::mt19937_64& rng) {
  std::vector<GateKind> single, multi;
  std::vector<GateKind> pool = options.kinds;
  if (pool.empty()) {
    for (std::size_t i = 0; i < kNumFeatureGates; ++i) pool.push_back(static_cast<GateKind>(i));
  }
  for (GateKind k : pool) {
    const int arity = gate_info(k).arity;
    if (arity == 1) single.push_back(k);
    else if (arity <= options.n_qubits) multi.push_back(k);
  }
  if (single.empty() && multi.empty()) throw CircuitError("random_circuit: no usable gate kinds");

  QuantumCircuit c(options.n_qubits);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<int> wires(static_cast<std::size_t>(options.n_qubits));
  for (int i = 0; i < options.n_qubits; ++i) wires[i] = i;

  for (int i = 0; i < options.n_gates; ++i) {
    const bool pick_multi = !multi.empty() && (single.empty() || coin(rng) < options.multi_qubit_fraction);
    const auto& from = pick_multi ? multi : single;
    const GateKind kind = from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    const GateInfo& info = gate_info(kind);
    std::shuffle(wires.begin(), wires.end(), rng);
    std::vector<int> qs(wires.begin(), wires.begin() + info.arity);
    std::vector<double> params;
    for (int p = 0; p < info.num_params; ++p) params.push_back(angle(rng));
    c.add(kind, std::move(qs), std::move(params));
  }
  return c;
}

std::vector<QuantumCircuit> random_corpus(const CorpusOptions& options) {
  if (options.count < 0) throw CircuitError("random_corpus: negative circuit count");
  if (options.min_qubits < 1 || options.max_qubits < options.min_qubits) {
    throw CircuitError("random_corpus: bad qubit range");
  }
  if (options.min_gates < 1 || options.max_gates < options.min_gates) throw CircuitError("random_corpus: bad gate range");
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> width(options.min_qubits, options.max_qubits);
  std::uniform_int_distribution<int> length(options.min_gates, options.max_gates);
  std::vector<QuantumCircuit> out;
  for (int i = 0; i < options.count; ++i) {
    RandomCircuitOptions o;
    o.n_qubits = width(rng);
    o.n_gates = length(rng);
    QuantumCircuit c = random_circuit(o, rng);
    char name[32];
    std::snprintf(name, sizeof name, "rand%03d", i);
    c.set_name(name);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace qfrag
