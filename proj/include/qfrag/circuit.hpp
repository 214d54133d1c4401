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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfrag {

/// Gate kinds in feature-column order, followed by the two non-feature
/// pseudo-ops.
enum class GateKind : std::uint8_t {
  H,
  CNOT,
  X,
  Y,
  Z,
  RX,
  RY,
  RZ,
  CZ,
  CP,
  T,
  TOFFOLI,
  SWAP,
  TDG,
  S,
  SDG,
  U3,
  MEASURE,
  BARRIER,
};

inline constexpr std::size_t kNumFeatureGates = 17;

struct GateInfo {
  std::string_view name;  // canonical OpenQASM name
  int arity;              // -1 for variadic pseudo-ops (barrier)
  int num_params;
  bool is_feature;
};

const GateInfo& gate_info(GateKind kind);

/// Feature column of a gate kind, or nullopt for MEASURE/BARRIER.
std::optional<std::size_t> feature_column(GateKind kind);

std::optional<GateKind> gate_kind_from_name(std::string_view name);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<double> params;

  bool is_pseudo() const { return kind == GateKind::MEASURE || kind == GateKind::BARRIER; }
  bool acts_on(int q) const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

class QuantumCircuit {
 public:
  QuantumCircuit() = default;
  explicit QuantumCircuit(int n_qubits, std::string name = {});

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Appends after validating arity, parameter count and wire indices.
  QuantumCircuit& add(GateKind kind, std::vector<int> qubits, std::vector<double> params = {});
  QuantumCircuit& add(Gate gate);

  /// Copy with MEASURE and BARRIER removed.
  QuantumCircuit without_pseudo_ops() const;

  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  friend bool operator==(const QuantumCircuit& a, const QuantumCircuit& b) {
    return a.n_qubits_ == b.n_qubits_ && a.gates_ == b.gates_;
  }

 private:
  int n_qubits_ = 0;
  std::vector<Gate> gates_;
  std::string name_;
};

/// Longest dependency chain, ignoring MEASURE and BARRIER.
int depth(const QuantumCircuit& circuit);

/// Cut wire `qubit` immediately after gate `position` acts on it.
struct WireCutPoint {
  int qubit = 0;
  int position = -1;

  friend auto operator<=>(const WireCutPoint&, const WireCutPoint&) = default;
};

/// Interior wire segments: (q, g) where gate g acts on q and a later gate
/// also acts on q. Sorted by (qubit, position). Pseudo-ops are not gates
/// for this purpose.
std::vector<WireCutPoint> enumerate_wire_cut_positions(const QuantumCircuit& circuit);

/// Index of the next non-pseudo gate after `position` acting on `qubit`,
/// or -1 if there is none.
int next_gate_on_wire(const QuantumCircuit& circuit, int qubit, int position);

}  // namespace qfrag
