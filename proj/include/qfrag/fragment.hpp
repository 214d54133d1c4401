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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfrag/circuit.hpp"

namespace qfrag {

/// One side of a cut. Local wire i of `circuit` is wire `wires[i]` of the
/// circuit that was cut; `wires` is ascending.
struct Fragment {
  QuantumCircuit circuit;
  std::vector<int> wires;
  std::vector<int> gate_indices;  // positions of the fragment's gates in the cut circuit

  int local_wire(int wire) const;  // -1 if the wire is not in this fragment
};

struct CutCandidate {
  std::vector<WireCutPoint> cut_points;  // sorted
  Fragment upstream;                     // measures the cut wires at its end
  Fragment downstream;                   // prepares the cut wires at its start
  std::vector<int> cut_wires;            // wire of each cut point, ascending
  int d = 0;                             // qubits of the larger fragment

  /// Qubit-set notation, e.g. "{q0,q1,q2};{q2,q3,q4}".
  std::string label() const;
};

/// Every set of 1..max_cuts wire-cut points that splits the circuit's gates
/// into exactly two connected fragments with all cut wires running from the
/// upstream to the downstream fragment. Ordered lexicographically by the
/// sorted cut-point lists.
std::vector<CutCandidate> enumerate_cuts(const QuantumCircuit& circuit, int max_cuts = 2);

/// Materializes one cut, or returns nullopt if the cut points do not form a
/// valid two-fragment cut.
std::optional<CutCandidate> make_cut(const QuantumCircuit& circuit, std::vector<WireCutPoint> cut_points);

using ErrorPredictor = std::function<double(const QuantumCircuit&)>;

struct ScoredCut {
  CutCandidate candidate;
  double e_p1 = 0.0;  // predicted error of the upstream fragment
  double e_p2 = 0.0;  // predicted error of the downstream fragment
  double distance = 0.0;

  ScoredCut() = default;
  ScoredCut(CutCandidate c, double upstream_error, double downstream_error);
};

std::vector<ScoredCut> score_cuts(const std::vector<CutCandidate>& candidates, const ErrorPredictor& predictor);

/// Index of the smallest distance; ties go to the smaller max(e_p1, e_p2),
/// then to the lower index.
std::size_t select_cut(const std::vector<ScoredCut>& scored);
std::size_t select_cut(const std::vector<CutCandidate>& candidates, const ErrorPredictor& predictor);

struct FragmentNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  QuantumCircuit circuit;
  std::vector<int> wires;       // local wire i is parent wire wires[i]
  std::vector<int> root_wires;  // local wire i is root wire root_wires[i]
  double predicted_error = 0.0;
  bool unsplittable = false;
  std::string reason;  // why an unsplittable leaf stopped
  std::optional<ScoredCut> cut;
  int upstream = -1;
  int downstream = -1;

  bool is_leaf() const { return !cut.has_value(); }
};

struct FragmentationTree {
  std::vector<FragmentNode> nodes;  // nodes[0] is the root; children follow parents
  double threshold = 50.0;
  int max_cuts = 2;
  int max_depth = 8;

  const FragmentNode& root() const { return nodes.front(); }
  std::vector<int> leaves() const;
  int split_count() const;
};

struct FragmentOptions {
  double threshold = 50.0;
  int max_cuts = 2;
  int max_depth = 8;
};

FragmentationTree fragment_recursively(const QuantumCircuit& circuit, const ErrorPredictor& predictor,
                                       const FragmentOptions& options = {});

/// Tree holding the circuit as its only (leaf) node.
FragmentationTree single_node_tree(const QuantumCircuit& circuit, double predicted_error = 0.0);

/// Turns leaf `node_id` into an internal node split by `cut`, appending its
/// two fragments as new leaves. Returns the upstream child's id; the
/// downstream child follows it.
int split_node(FragmentationTree& tree, int node_id, const CutCandidate& cut, double e_p1 = 0.0, double e_p2 = 0.0);

/// JSON document listing every node with its circuit as inline QASM.
std::string tree_to_json(const FragmentationTree& tree);
FragmentationTree tree_from_json(std::string_view text);

}  // namespace qfrag
