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

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qfrag/circuit.hpp"
#include "qfrag/fragment.hpp"
#include "qfrag/qasm.hpp"
#include "qfrag/random_circuit.hpp"

namespace fixture {

using namespace qfrag;

inline QuantumCircuit bell() {
  QuantumCircuit c(2, "bell");
  c.add(GateKind::H, {0}).add(GateKind::CNOT, {0, 1});
  return c;
}

inline QuantumCircuit ghz3() {
  QuantumCircuit c(3, "ghz3");
  c.add(GateKind::H, {0}).add(GateKind::CNOT, {0, 1}).add(GateKind::CNOT, {1, 2});
  return c;
}

/// Five-qubit stand-in shaped like the Shor example: a phase-estimation
/// block on q0..q2 followed by q2 driving a modular-multiplication block on
/// q3, q4. Cutting q2 between the blocks gives {q0,q1,q2};{q2,q3,q4}.
inline QuantumCircuit shor5() {
  const double pi = std::acos(-1.0);
  QuantumCircuit c(5, "shor5");
  c.add(GateKind::H, {0}).add(GateKind::H, {1}).add(GateKind::H, {2});
  c.add(GateKind::CP, {1, 2}, {pi / 2}).add(GateKind::CP, {0, 2}, {pi / 4}).add(GateKind::CNOT, {0, 1});
  c.add(GateKind::CNOT, {2, 3}).add(GateKind::CNOT, {2, 4}).add(GateKind::TOFFOLI, {2, 3, 4}).add(GateKind::H, {3});
  return c;
}

inline constexpr const char* kShorLabel = "{q0,q1,q2};{q2,q3,q4}";

/// Stub predictor for shor5(): 59.210 for the whole circuit, 10.05 / 25.99
/// for the fragments of the {q0,q1,q2};{q2,q3,q4} cut, and otherwise 2.444
/// for fragments of at most three qubits and 46.858 for wider ones, so that
/// every other candidate is far from balanced.
inline ErrorPredictor shor5_stub(int max_cuts = 2) {
  const QuantumCircuit root = shor5();
  std::map<std::string, double> table;
  for (const auto& c : enumerate_cuts(root, max_cuts)) {
    if (c.label() != kShorLabel) continue;
    table[emit_qasm(c.upstream.circuit)] = 10.05;
    table[emit_qasm(c.downstream.circuit)] = 25.99;
  }
  table[emit_qasm(root)] = 59.210;
  return [table](const QuantumCircuit& c) {
    const auto it = table.find(emit_qasm(c));
    if (it != table.end()) return it->second;
    return c.n_qubits() <= 3 ? 2.444 : 46.858;
  };
}

/// Fragment-error pairs of the five rows of the cut table, in row order.
inline const std::vector<std::pair<double, double>>& cut_table_pairs() {
  static const std::vector<std::pair<double, double>> rows = {
      {2.54, 46.112}, {7.51, 43.89}, {10.05, 25.99}, {2.444, 46.858}, {2.444, 46.58}};
  return rows;
}

inline const std::vector<std::string>& cut_table_labels() {
  static const std::vector<std::string> rows = {"{q0};{q1,q2,q3,q4}", "{q0,q1};{q2,q3,q4}", kShorLabel,
                                                "{q0,q1,q2,q3};{q4}", "{q0,q1,q2,q4};{q3}"};
  return rows;
}

struct CutCase {
  QuantumCircuit circuit;
  CutCandidate cut;
};

/// Random circuit on 3..6 qubits together with one of its valid cuts,
/// chosen uniformly from the candidates with exactly `n_cuts` cut points.
inline CutCase random_cut_case(std::mt19937_64& rng, int n_cuts) {
  std::uniform_int_distribution<int> width(3, 6);
  for (;;) {
    RandomCircuitOptions opt;
    opt.n_qubits = width(rng);
    opt.n_gates = 3 * opt.n_qubits + static_cast<int>(rng() % 6);
    QuantumCircuit c = random_circuit(opt, rng);
    std::vector<CutCandidate> pool;
    for (auto& cand : enumerate_cuts(c, n_cuts)) {
      if (static_cast<int>(cand.cut_points.size()) == n_cuts) pool.push_back(std::move(cand));
    }
    if (pool.empty()) continue;
    CutCandidate pick = pool[rng() % pool.size()];
    return {std::move(c), std::move(pick)};
  }
}

}  // namespace fixture
