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

#include "qfrag/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "qfrag/error.hpp"

namespace qfrag {

namespace {

constexpr std::uint64_t kSideStride = 1000003;

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<int> cut_locals(const Fragment& f, const std::vector<int>& cut_wires) {
  std::vector<int> out;
  for (int w : cut_wires) {
    const int l = f.local_wire(w);
    if (l < 0) throw ReconstructError("cut wire " + std::to_string(w) + " is missing from a fragment");
    out.push_back(l);
  }
  return out;
}

void finalize(OutcomeDistribution& dist, bool exact, CombineStats& stats) {
  stats.raw_total = dist.total();
  OutcomeDistribution kept(dist.n_bits());
  for (const auto& [k, p] : dist.probs()) {
    if (p < 0.0) stats.clipped_mass += -p;
    if (p > 1e-15) kept.set(k, p);
  }
  if (kept.support_size() == 0) throw ReconstructError("reconstruction produced no positive probability");
  if (!exact || std::abs(kept.total() - 1.0) > 1e-9) {
    kept.normalize();
    stats.renormalized = true;
  }
  dist = std::move(kept);
}

}  // namespace

char observable_name(Observable o) {
  switch (o) {
    case Observable::I: return 'I';
    case Observable::X: return 'X';
    case Observable::Y: return 'Y';
    case Observable::Z: return 'Z';
  }
  return '?';
}

Basis measurement_basis(Observable o) {
  switch (o) {
    case Observable::X: return Basis::X;
    case Observable::Y: return Basis::Y;
    default: return Basis::Z;
  }
}

std::vector<ReconstructionTerm> build_term_table(int n_cut_wires) {
  if (n_cut_wires < 1) throw ReconstructError("term table needs at least one cut wire");
  using O = Observable;
  using S = InitState;
  const std::vector<ReconstructionTerm> single = {
      {0.5, {O::I}, {S::Zero}},  {0.5, {O::Z}, {S::Zero}},  {-0.5, {O::X}, {S::Zero}}, {-0.5, {O::Y}, {S::Zero}},
      {0.5, {O::I}, {S::One}},   {-0.5, {O::Z}, {S::One}},  {-0.5, {O::X}, {S::One}},  {-0.5, {O::Y}, {S::One}},
      {1.0, {O::X}, {S::Plus}},  {1.0, {O::Y}, {S::PlusI}},
  };
  std::vector<ReconstructionTerm> table = single;
  for (int w = 1; w < n_cut_wires; ++w) {
    std::vector<ReconstructionTerm> next;
    for (const auto& t : table) {
      for (const auto& s : single) {
        ReconstructionTerm p = t;
        p.coefficient *= s.coefficient;
        p.observables.push_back(s.observables[0]);
        p.inits.push_back(s.inits[0]);
        next.push_back(std::move(p));
      }
    }
    table = std::move(next);
  }
  return table;
}

std::pair<CutBoundarySpec, CutBoundarySpec> split_boundary(const CutCandidate& cut, const CutBoundarySpec& boundary) {
  CutBoundarySpec up, down;
  auto is_cut = [&](int w) { return std::find(cut.cut_wires.begin(), cut.cut_wires.end(), w) != cut.cut_wires.end(); };
  for (const auto& [w, s] : boundary.init_states) {
    const int u = cut.upstream.local_wire(w), d = cut.downstream.local_wire(w);
    if (u >= 0 && (d < 0 || is_cut(w))) up.init_states[u] = s;
    else if (d >= 0) down.init_states[d] = s;
    else throw ReconstructError("preparation on wire " + std::to_string(w) + " that no fragment uses");
  }
  for (const auto& [w, b] : boundary.measure_bases) {
    const int u = cut.upstream.local_wire(w), d = cut.downstream.local_wire(w);
    if (d >= 0) down.measure_bases[d] = b;
    else if (u >= 0) up.measure_bases[u] = b;
    else throw ReconstructError("measurement basis on wire " + std::to_string(w) + " that no fragment uses");
  }
  return {up, down};
}

FragmentRunSet collect_fragment_runs(const CutCandidate& cut, const CutBoundarySpec& boundary,
                                     const FragmentRunner& runner, bool exact) {
  const std::size_t k = cut.cut_wires.size();
  if (k == 0) throw ReconstructError("cut has no cut wires");
  const auto up_cuts = cut_locals(cut.upstream, cut.cut_wires);
  const auto down_cuts = cut_locals(cut.downstream, cut.cut_wires);
  const auto [bu, bd] = split_boundary(cut, boundary);
  FragmentRunSet runs;
  runs.exact = exact;
  for (std::size_t idx = 0; idx < ipow(3, k); ++idx) {
    std::vector<Basis> bases(k);
    CutBoundarySpec b = bu;
    std::size_t rest = idx;
    for (std::size_t j = k; j-- > 0;) {
      bases[j] = kAllBases[rest % 3];
      rest /= 3;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (b.measure_bases.count(up_cuts[j])) throw ReconstructError("cut wire already carries a measurement basis");
      b.measure_bases[up_cuts[j]] = bases[j];
    }
    runs.upstream[bases] = split_outcomes(runner(0, b, idx), up_cuts);
  }
  for (std::size_t idx = 0; idx < ipow(4, k); ++idx) {
    std::vector<InitState> inits(k);
    CutBoundarySpec b = bd;
    std::size_t rest = idx;
    for (std::size_t j = k; j-- > 0;) {
      inits[j] = kAllInitStates[rest % 4];
      rest /= 4;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (b.init_states.count(down_cuts[j])) throw ReconstructError("cut wire already carries a preparation");
      b.init_states[down_cuts[j]] = inits[j];
    }
    runs.downstream[inits] = runner(1, b, idx);
  }
  return runs;
}

FragmentRunSet execute_fragment_runs(const CutCandidate& cut, const ExecutionMode& mode,
                                     const CutBoundarySpec& boundary, std::uint64_t salt) {
  return collect_fragment_runs(
      cut, boundary,
      [&](int side, const CutBoundarySpec& b, std::size_t variant) {
        const auto& c = side == 0 ? cut.upstream.circuit : cut.downstream.circuit;
        return execute(c, b, mode.derived(mix_seed(salt, side * kSideStride + variant)));
      },
      mode.is_exact());
}

OutcomeDistribution combine(const CutCandidate& cut, int n_wires, const FragmentRunSet& runs,
                            const std::vector<ReconstructionTerm>& table, CombineStats* stats, bool clip) {
  const std::size_t k = cut.cut_wires.size();
  if (k == 0) throw ReconstructError("cut has no cut wires");
  if (runs.upstream.size() != ipow(3, k) || runs.downstream.size() != ipow(4, k)) {
    throw ReconstructError("incomplete fragment run set");
  }
  for (const auto& w : cut.upstream.wires) {
    if (w >= n_wires) throw ReconstructError("upstream wire map exceeds the circuit width");
  }
  for (const auto& w : cut.downstream.wires) {
    if (w >= n_wires) throw ReconstructError("downstream wire map exceeds the circuit width");
  }
  const std::size_t n_obs = ipow(4, k);
  auto obs_index = [&](const std::vector<Observable>& o) {
    std::size_t i = 0;
    for (auto v : o) i = i * 4 + static_cast<std::size_t>(v);
    return i;
  };
  auto init_index = [&](const std::vector<InitState>& s) {
    std::size_t i = 0;
    for (auto v : s) i = i * 4 + static_cast<std::size_t>(v);
    return i;
  };

  // Signed cut-wire marginals T[s1][o] for every observable assignment o.
  std::map<Bits, std::vector<double>> traces;
  std::vector<int> output_wires;
  bool have_outputs = false;
  for (const auto& [bases, joint] : runs.upstream) {
    if (bases.size() != k || joint.cut_wires.size() != k) throw ReconstructError("upstream run has the wrong cut count");
    if (!have_outputs) {
      output_wires = joint.output_wires;
      have_outputs = true;
    } else if (joint.output_wires != output_wires) {
      throw ReconstructError("upstream runs disagree on output wires");
    }
    for (std::size_t o = 0; o < n_obs; ++o) {
      // Decode o and keep it only if this run's bases supply it.
      std::vector<Observable> obs(k);
      std::size_t rest = o;
      bool match = true;
      for (std::size_t j = k; j-- > 0;) {
        obs[j] = static_cast<Observable>(rest % 4);
        rest /= 4;
        match = match && measurement_basis(obs[j]) == bases[j];
      }
      if (!match) continue;
      for (const auto& [key, p] : joint.probs) {
        const auto [s1, m] = key;
        double sign = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
          if (obs[j] != Observable::I && ((m >> j) & 1U)) sign = -sign;
        }
        auto& t = traces[s1];
        if (t.empty()) t.assign(n_obs, 0.0);
        t[o] += sign * p;
      }
    }
  }

  std::vector<const OutcomeDistribution*> down(n_obs, nullptr);
  for (const auto& [inits, dist] : runs.downstream) {
    if (inits.size() != k) throw ReconstructError("downstream run has the wrong cut count");
    if (dist.n_bits() != static_cast<int>(cut.downstream.wires.size())) {
      throw ReconstructError("downstream run width does not match its fragment");
    }
    down[init_index(inits)] = &dist;
  }

  OutcomeDistribution out(n_wires);
  std::vector<double> weight(n_obs);
  for (const auto& [s1, t] : traces) {
    std::fill(weight.begin(), weight.end(), 0.0);
    for (const auto& term : table) weight[init_index(term.inits)] += term.coefficient * t[obs_index(term.observables)];
    Bits base = 0;
    for (std::size_t i = 0; i < output_wires.size(); ++i) {
      if ((s1 >> i) & 1U) base |= Bits{1} << cut.upstream.wires[static_cast<std::size_t>(output_wires[i])];
    }
    for (std::size_t v = 0; v < n_obs; ++v) {
      if (weight[v] == 0.0 || !down[v]) continue;
      for (const auto& [s2, r] : down[v]->probs()) {
        Bits key = base;
        for (std::size_t w = 0; w < cut.downstream.wires.size(); ++w) {
          if ((s2 >> w) & 1U) key |= Bits{1} << cut.downstream.wires[w];
        }
        out.add(key, weight[v] * r);
      }
    }
  }
  CombineStats local;
  if (clip) finalize(out, runs.exact, local);
  else local.raw_total = out.total();
  if (stats) *stats = local;
  return out;
}

FoldResult fold_tree(const FragmentationTree& tree, const ExecutionMode& mode) {
  if (tree.nodes.empty()) throw ReconstructError("empty fragmentation tree");
  FoldResult result;
  const auto table_for = [](std::size_t k) {
    static std::map<std::size_t, std::vector<ReconstructionTerm>> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, build_term_table(static_cast<int>(k))).first;
    return it->second;
  };
  for (const auto& n : tree.nodes) {
    if (n.is_leaf() && n.unsplittable) result.unsplittable_leaves.push_back(n.id);
  }

  std::function<OutcomeDistribution(int, const CutBoundarySpec&, std::uint64_t)> fold =
      [&](int id, const CutBoundarySpec& boundary, std::uint64_t salt) {
        const auto& node = tree.nodes.at(static_cast<std::size_t>(id));
        if (node.is_leaf()) {
          ++result.executions;
          return execute(node.circuit, boundary, id == 0 ? mode : mode.derived(salt));
        }
        const auto& cut = node.cut->candidate;
        const int children[2] = {node.upstream, node.downstream};
        const auto runs = collect_fragment_runs(
            cut, boundary,
            [&](int side, const CutBoundarySpec& b, std::size_t variant) {
              return fold(children[side], b, mix_seed(salt, static_cast<std::uint64_t>(side) * kSideStride + variant));
            },
            mode.is_exact());
        CombineStats stats;
        auto dist = combine(cut, node.circuit.n_qubits(), runs, table_for(cut.cut_wires.size()), &stats);
        result.clipped_mass += stats.clipped_mass;
        return dist;
      };
  result.distribution = fold(0, {}, 0);

  const auto& root = tree.root();
  if (!root.is_leaf() && !mode.is_exact() && mode.noise.p_ro > 0.0) {
    const auto& cut = root.cut->candidate;
    for (int w = 0; w < root.circuit.n_qubits(); ++w) {
      if (cut.upstream.local_wire(w) >= 0 || cut.downstream.local_wire(w) >= 0) continue;
      OutcomeDistribution flipped(result.distribution.n_bits());
      for (const auto& [key, p] : result.distribution.probs()) {
        flipped.add(key, (1.0 - mode.noise.p_ro) * p);
        flipped.add(key ^ (Bits{1} << w), mode.noise.p_ro * p);
      }
      result.distribution = std::move(flipped);
    }
  }
  return result;
}

}  // namespace qfrag
