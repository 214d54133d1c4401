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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qfrag/distribution.hpp"
#include "qfrag/fragment.hpp"
#include "qfrag/simulator.hpp"

namespace qfrag {

enum class Observable : std::uint8_t { I, X, Y, Z };

char observable_name(Observable o);

/// Basis whose run supplies the signed marginal of `o`; I and Z share the
/// Z run.
Basis measurement_basis(Observable o);

/// coefficient * Tr(rho O_1 ... O_k) is the weight of preparing
/// inits[0..k) on the downstream cut wires.
struct ReconstructionTerm {
  double coefficient = 0.0;
  std::vector<Observable> observables;
  std::vector<InitState> inits;
};

/// Single-wire table:
///   |0>:  +1/2 I, +1/2 Z, -1/2 X, -1/2 Y
///   |1>:  +1/2 I, -1/2 Z, -1/2 X, -1/2 Y
///   |+>:  X        |+i>: Y
/// and for k wires every product of k single-wire terms.
std::vector<ReconstructionTerm> build_term_table(int n_cut_wires);

/// Executions needed to reconstruct one cut: the upstream fragment in every
/// basis assignment of the cut wires and the downstream fragment with every
/// preparation of them. Assignment vectors follow CutCandidate::cut_wires.
struct FragmentRunSet {
  std::map<std::vector<Basis>, JointOutcomes> upstream;
  std::map<std::vector<InitState>, OutcomeDistribution> downstream;
  bool exact = true;

  std::size_t run_count() const { return upstream.size() + downstream.size(); }
};

/// Boundary of the cut circuit split between its two fragments: each
/// preparation goes to the fragment holding the wire's first gate, each
/// measurement basis to the fragment holding its last gate. Wires are
/// translated to fragment-local indices.
std::pair<CutBoundarySpec, CutBoundarySpec> split_boundary(const CutCandidate& cut, const CutBoundarySpec& boundary);

/// Produces the distribution of one fragment side under a boundary.
/// `side` is 0 for upstream and 1 for downstream; `variant` numbers the
/// assignment in the order the run set enumerates them.
using FragmentRunner = std::function<OutcomeDistribution(int side, const CutBoundarySpec& boundary, std::size_t variant)>;

FragmentRunSet collect_fragment_runs(const CutCandidate& cut, const CutBoundarySpec& boundary,
                                     const FragmentRunner& runner, bool exact);

/// Runs both fragments of a cut directly on the simulator. Each variant
/// uses the noise stream mode.derived(mix_seed(salt, side * 1000003 + variant)).
FragmentRunSet execute_fragment_runs(const CutCandidate& cut, const ExecutionMode& mode,
                                     const CutBoundarySpec& boundary = {}, std::uint64_t salt = 0);

struct CombineStats {
  double raw_total = 0.0;     // sum of probabilities before clipping
  double clipped_mass = 0.0;  // magnitude of negative probability removed
  bool renormalized = false;
};

/// Recombines the run set into a distribution over the `n_wires` wires of
/// the cut circuit. Wires in neither fragment read 0. With `clip` the exact
/// mode drops values below 1e-15 and renormalizes only when the total is
/// off by more than 1e-9; the shots mode clips negatives and always
/// renormalizes.
OutcomeDistribution combine(const CutCandidate& cut, int n_wires, const FragmentRunSet& runs,
                            const std::vector<ReconstructionTerm>& table, CombineStats* stats = nullptr,
                            bool clip = true);

struct FoldResult {
  OutcomeDistribution distribution;
  double clipped_mass = 0.0;
  std::size_t executions = 0;
  std::vector<int> unsplittable_leaves;
};

/// Executes the leaves of the tree and recombines bottom-up. In shots mode
/// wires of the root that no gate touches read 1 with the readout flip
/// probability.
FoldResult fold_tree(const FragmentationTree& tree, const ExecutionMode& mode);

}  // namespace qfrag
