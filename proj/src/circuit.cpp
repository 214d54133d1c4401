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

#include "qfrag/circuit.hpp"

#include <algorithm>
#include <unordered_map>

#include "qfrag/error.hpp"

namespace qfrag {

namespace {

constexpr std::array<GateInfo, 19> kGateTable = {{
    {"h", 1, 0, true},
    {"cx", 2, 0, true},
    {"x", 1, 0, true},
    {"y", 1, 0, true},
    {"z", 1, 0, true},
    {"rx", 1, 1, true},
    {"ry", 1, 1, true},
    {"rz", 1, 1, true},
    {"cz", 2, 0, true},
    {"cp", 2, 1, true},
    {"t", 1, 0, true},
    {"ccx", 3, 0, true},
    {"swap", 2, 0, true},
    {"tdg", 1, 0, true},
    {"s", 1, 0, true},
    {"sdg", 1, 0, true},
    {"u3", 1, 3, true},
    {"measure", 1, 0, false},
    {"barrier", -1, 0, false},
}};

}  // namespace

const GateInfo& gate_info(GateKind kind) { return kGateTable[static_cast<std::size_t>(kind)]; }

std::optional<std::size_t> feature_column(GateKind kind) {
  if (!gate_info(kind).is_feature) return std::nullopt;
  return static_cast<std::size_t>(kind);
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  static const std::unordered_map<std::string_view, GateKind> aliases = {
      {"cnot", GateKind::CNOT}, {"cu1", GateKind::CP}, {"toffoli", GateKind::TOFFOLI}};
  for (std::size_t i = 0; i < kGateTable.size(); ++i) {
    if (kGateTable[i].name == name) return static_cast<GateKind>(i);
  }
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  return std::nullopt;
}

bool Gate::acts_on(int q) const { return std::find(qubits.begin(), qubits.end(), q) != qubits.end(); }

QuantumCircuit::QuantumCircuit(int n_qubits, std::string name) : n_qubits_(n_qubits), name_(std::move(name)) {
  if (n_qubits < 1) throw CircuitError("circuit must have at least one qubit");
}

QuantumCircuit& QuantumCircuit::add(GateKind kind, std::vector<int> qubits, std::vector<double> params) {
  return add(Gate{kind, std::move(qubits), std::move(params)});
}

QuantumCircuit& QuantumCircuit::add(Gate gate) {
  const GateInfo& info = gate_info(gate.kind);
  const std::string name(info.name);
  if (info.arity >= 0 && static_cast<int>(gate.qubits.size()) != info.arity) {
    throw CircuitError(name + " expects " + std::to_string(info.arity) + " qubit(s), got " +
                       std::to_string(gate.qubits.size()));
  }
  if (gate.qubits.empty()) throw CircuitError(name + " has no qubit operands");
  if (static_cast<int>(gate.params.size()) != info.num_params) {
    throw CircuitError(name + " expects " + std::to_string(info.num_params) + " parameter(s), got " +
                       std::to_string(gate.params.size()));
  }
  for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
    const int q = gate.qubits[i];
    if (q < 0 || q >= n_qubits_) {
      throw CircuitError(name + " operand q[" + std::to_string(q) + "] out of range for " +
                         std::to_string(n_qubits_) + " qubit(s)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gate.qubits[j] == q) throw CircuitError(name + " repeats operand q[" + std::to_string(q) + "]");
    }
  }
  gates_.push_back(std::move(gate));
  return *this;
}

QuantumCircuit QuantumCircuit::without_pseudo_ops() const {
  QuantumCircuit out = *this;
  std::erase_if(out.gates_, [](const Gate& g) { return g.is_pseudo(); });
  return out;
}

int depth(const QuantumCircuit& circuit) {
  std::vector<int> level(static_cast<std::size_t>(circuit.n_qubits()), 0);
  int result = 0;
  for (const Gate& g : circuit.gates()) {
    if (g.is_pseudo()) continue;
    int l = 0;
    for (int q : g.qubits) l = std::max(l, level[q]);
    ++l;
    for (int q : g.qubits) level[q] = l;
    result = std::max(result, l);
  }
  return result;
}

int next_gate_on_wire(const QuantumCircuit& circuit, int qubit, int position) {
  const auto& gates = circuit.gates();
  for (int g = position + 1; g < static_cast<int>(gates.size()); ++g) {
    if (!gates[g].is_pseudo() && gates[g].acts_on(qubit)) return g;
  }
  return -1;
}

std::vector<WireCutPoint> enumerate_wire_cut_positions(const QuantumCircuit& circuit) {
  std::vector<WireCutPoint> out;
  const auto& gates = circuit.gates();
  for (int q = 0; q < circuit.n_qubits(); ++q) {
    int prev = -1;
    for (int g = 0; g < static_cast<int>(gates.size()); ++g) {
      if (gates[g].is_pseudo() || !gates[g].acts_on(q)) continue;
      if (prev >= 0) out.push_back({q, prev});
      prev = g;
    }
  }
  return out;
}

}  // namespace qfrag
