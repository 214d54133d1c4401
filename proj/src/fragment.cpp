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

#include "qfrag/fragment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"
#include "qfrag/error.hpp"
#include "qfrag/qasm.hpp"

namespace qfrag {

using nlohmann::json;

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

Fragment build_fragment(const QuantumCircuit& circuit, const std::vector<int>& gate_indices, const char* suffix) {
  Fragment f;
  f.gate_indices = gate_indices;
  std::set<int> wires;
  for (int g : gate_indices) {
    for (int q : circuit.gates()[static_cast<std::size_t>(g)].qubits) wires.insert(q);
  }
  f.wires.assign(wires.begin(), wires.end());
  f.circuit = QuantumCircuit(static_cast<int>(f.wires.size()), circuit.name() + suffix);
  for (int g : gate_indices) {
    Gate gate = circuit.gates()[static_cast<std::size_t>(g)];
    for (int& q : gate.qubits) q = f.local_wire(q);
    f.circuit.add(std::move(gate));
  }
  return f;
}

std::string wire_set(const std::vector<int>& wires) {
  std::string s = "{";
  for (std::size_t i = 0; i < wires.size(); ++i) s += (i ? ",q" : "q") + std::to_string(wires[i]);
  return s + "}";
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (cur.size() == k) {
    visit(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

int Fragment::local_wire(int wire) const {
  const auto it = std::lower_bound(wires.begin(), wires.end(), wire);
  return (it != wires.end() && *it == wire) ? static_cast<int>(it - wires.begin()) : -1;
}

std::string CutCandidate::label() const { return wire_set(upstream.wires) + ";" + wire_set(downstream.wires); }

std::optional<CutCandidate> make_cut(const QuantumCircuit& circuit, std::vector<WireCutPoint> cut_points) {
  if (cut_points.empty()) return std::nullopt;
  std::sort(cut_points.begin(), cut_points.end());
  if (std::adjacent_find(cut_points.begin(), cut_points.end()) != cut_points.end()) return std::nullopt;
  const auto& gates = circuit.gates();
  const int n_gates = static_cast<int>(gates.size());
  std::vector<int> cut_next;
  for (const auto& cp : cut_points) {
    if (cp.qubit < 0 || cp.qubit >= circuit.n_qubits() || cp.position < 0 || cp.position >= n_gates) {
      return std::nullopt;
    }
    const auto& g = gates[static_cast<std::size_t>(cp.position)];
    if (g.is_pseudo() || !g.acts_on(cp.qubit)) return std::nullopt;
    const int next = next_gate_on_wire(circuit, cp.qubit, cp.position);
    if (next < 0) return std::nullopt;
    cut_next.push_back(next);
  }

  DisjointSets sets(gates.size());
  for (int q = 0; q < circuit.n_qubits(); ++q) {
    int prev = -1;
    for (int g = 0; g < n_gates; ++g) {
      if (gates[static_cast<std::size_t>(g)].is_pseudo() || !gates[static_cast<std::size_t>(g)].acts_on(q)) continue;
      if (prev >= 0 && !std::binary_search(cut_points.begin(), cut_points.end(), WireCutPoint{q, prev})) {
        sets.unite(prev, g);
      }
      prev = g;
    }
  }
  std::set<int> roots;
  for (int g = 0; g < n_gates; ++g) {
    if (!gates[static_cast<std::size_t>(g)].is_pseudo()) roots.insert(sets.find(g));
  }
  if (roots.size() != 2) return std::nullopt;
  const int up = sets.find(cut_points.front().position);
  const int down = sets.find(cut_next.front());
  if (up == down) return std::nullopt;
  for (std::size_t i = 0; i < cut_points.size(); ++i) {
    if (sets.find(cut_points[i].position) != up || sets.find(cut_next[i]) != down) return std::nullopt;
  }

  std::vector<int> up_gates, down_gates;
  for (int g = 0; g < n_gates; ++g) {
    if (gates[static_cast<std::size_t>(g)].is_pseudo()) continue;
    (sets.find(g) == up ? up_gates : down_gates).push_back(g);
  }
  CutCandidate c;
  c.cut_points = std::move(cut_points);
  c.upstream = build_fragment(circuit, up_gates, ".up");
  c.downstream = build_fragment(circuit, down_gates, ".down");
  for (const auto& cp : c.cut_points) c.cut_wires.push_back(cp.qubit);
  c.d = static_cast<int>(std::max(c.upstream.wires.size(), c.downstream.wires.size()));
  return c;
}

std::vector<CutCandidate> enumerate_cuts(const QuantumCircuit& circuit, int max_cuts) {
  if (max_cuts < 1) throw FragmentError("cut-size budget K must be at least 1");
  const auto positions = enumerate_wire_cut_positions(circuit);
  std::vector<std::vector<WireCutPoint>> sets;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(max_cuts) && k <= positions.size(); ++k) {
    std::vector<std::size_t> cur;
    combinations(positions.size(), k, 0, cur, [&](const std::vector<std::size_t>& idx) {
      std::vector<WireCutPoint> pts;
      for (std::size_t i : idx) pts.push_back(positions[i]);
      sets.push_back(std::move(pts));
    });
  }
  std::sort(sets.begin(), sets.end());
  std::vector<CutCandidate> out;
  for (auto& pts : sets) {
    if (auto c = make_cut(circuit, std::move(pts))) out.push_back(std::move(*c));
  }
  return out;
}

ScoredCut::ScoredCut(CutCandidate c, double upstream_error, double downstream_error)
    : candidate(std::move(c)),
      e_p1(upstream_error),
      e_p2(downstream_error),
      distance(std::abs(upstream_error - downstream_error)) {}

std::vector<ScoredCut> score_cuts(const std::vector<CutCandidate>& candidates, const ErrorPredictor& predictor) {
  std::vector<ScoredCut> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double a = predictor(c.upstream.circuit);
    const double b = predictor(c.downstream.circuit);
    out.emplace_back(c, a, b);
  }
  return out;
}

std::size_t select_cut(const std::vector<ScoredCut>& scored) {
  if (scored.empty()) throw FragmentError("no cut candidates to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    const auto& a = scored[i];
    const auto& b = scored[best];
    if (a.distance < b.distance ||
        (a.distance == b.distance && std::max(a.e_p1, a.e_p2) < std::max(b.e_p1, b.e_p2))) {
      best = i;
    }
  }
  return best;
}

std::size_t select_cut(const std::vector<CutCandidate>& candidates, const ErrorPredictor& predictor) {
  return select_cut(score_cuts(candidates, predictor));
}

std::vector<int> FragmentationTree::leaves() const {
  std::vector<int> out;
  for (const auto& n : nodes) {
    if (n.is_leaf()) out.push_back(n.id);
  }
  return out;
}

int FragmentationTree::split_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const FragmentNode& n) { return !n.is_leaf(); }));
}

FragmentationTree fragment_recursively(const QuantumCircuit& circuit, const ErrorPredictor& predictor,
                                       const FragmentOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 100.0)) {
    throw FragmentError("threshold must lie in (0, 100]");
  }
  if (options.max_cuts < 1) throw FragmentError("cut-size budget K must be at least 1");
  if (options.max_depth < 0) throw FragmentError("max_depth must be nonnegative");
  FragmentationTree tree;
  tree.threshold = options.threshold;
  tree.max_cuts = options.max_cuts;
  tree.max_depth = options.max_depth;

  std::function<int(QuantumCircuit, std::vector<int>, std::vector<int>, int, int)> build =
      [&](QuantumCircuit c, std::vector<int> wires, std::vector<int> root_wires, int parent, int depth) {
        FragmentNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.parent = parent;
        node.depth = depth;
        node.predicted_error = predictor(c);
        node.wires = std::move(wires);
        node.root_wires = std::move(root_wires);
        node.circuit = std::move(c);
        const int id = node.id;
        tree.nodes.push_back(std::move(node));
        auto& n = tree.nodes[static_cast<std::size_t>(id)];
        if (n.predicted_error <= options.threshold) return id;
        if (depth >= options.max_depth) {
          n.unsplittable = true;
          n.reason = "max depth reached";
          return id;
        }
        auto candidates = enumerate_cuts(n.circuit, options.max_cuts);
        if (candidates.empty()) {
          n.unsplittable = true;
          n.reason = "no valid cut within K";
          return id;
        }
        auto scored = score_cuts(candidates, predictor);
        ScoredCut chosen = std::move(scored[select_cut(scored)]);
        const std::vector<int> parent_root = n.root_wires;
        auto map_root = [&](const std::vector<int>& local) {
          std::vector<int> r;
          for (int w : local) r.push_back(parent_root[static_cast<std::size_t>(w)]);
          return r;
        };
        const Fragment up = chosen.candidate.upstream;
        const Fragment down = chosen.candidate.downstream;
        tree.nodes[static_cast<std::size_t>(id)].cut = std::move(chosen);
        const int u = build(up.circuit, up.wires, map_root(up.wires), id, depth + 1);
        const int d = build(down.circuit, down.wires, map_root(down.wires), id, depth + 1);
        tree.nodes[static_cast<std::size_t>(id)].upstream = u;
        tree.nodes[static_cast<std::size_t>(id)].downstream = d;
        return id;
      };
  std::vector<int> ident(static_cast<std::size_t>(circuit.n_qubits()));
  std::iota(ident.begin(), ident.end(), 0);
  build(circuit, ident, ident, -1, 0);
  return tree;
}

FragmentationTree single_node_tree(const QuantumCircuit& circuit, double predicted_error) {
  FragmentationTree tree;
  FragmentNode root;
  root.circuit = circuit;
  root.predicted_error = predicted_error;
  root.wires.resize(static_cast<std::size_t>(circuit.n_qubits()));
  std::iota(root.wires.begin(), root.wires.end(), 0);
  root.root_wires = root.wires;
  tree.nodes.push_back(std::move(root));
  return tree;
}

int split_node(FragmentationTree& tree, int node_id, const CutCandidate& cut, double e_p1, double e_p2) {
  if (node_id < 0 || node_id >= static_cast<int>(tree.nodes.size())) throw FragmentError("no such tree node");
  if (!tree.nodes[static_cast<std::size_t>(node_id)].is_leaf()) throw FragmentError("node is already split");
  const FragmentNode parent = tree.nodes[static_cast<std::size_t>(node_id)];
  int ids[2];
  const Fragment* sides[2] = {&cut.upstream, &cut.downstream};
  for (int s = 0; s < 2; ++s) {
    FragmentNode child;
    child.id = static_cast<int>(tree.nodes.size());
    child.parent = node_id;
    child.depth = parent.depth + 1;
    child.circuit = sides[s]->circuit;
    child.wires = sides[s]->wires;
    for (int w : child.wires) child.root_wires.push_back(parent.root_wires.at(static_cast<std::size_t>(w)));
    child.predicted_error = s == 0 ? e_p1 : e_p2;
    ids[s] = child.id;
    tree.nodes.push_back(std::move(child));
  }
  auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
  node.unsplittable = false;
  node.reason.clear();
  node.cut = ScoredCut(cut, e_p1, e_p2);
  node.upstream = ids[0];
  node.downstream = ids[1];
  return ids[0];
}

std::string tree_to_json(const FragmentationTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    json j;
    j["id"] = n.id;
    j["parent"] = n.parent;
    j["depth"] = n.depth;
    j["name"] = n.circuit.name();
    j["n_qubits"] = n.circuit.n_qubits();
    j["wires"] = n.wires;
    j["root_wires"] = n.root_wires;
    j["predicted_error"] = n.predicted_error;
    j["leaf"] = n.is_leaf();
    j["unsplittable"] = n.unsplittable;
    if (n.unsplittable) j["reason"] = n.reason;
    j["qasm"] = emit_qasm(n.circuit);
    if (n.cut) {
      json pts = json::array();
      for (const auto& cp : n.cut->candidate.cut_points) pts.push_back({{"qubit", cp.qubit}, {"after_gate", cp.position}});
      j["cut"] = {{"points", pts},
                  {"label", n.cut->candidate.label()},
                  {"e_p1", n.cut->e_p1},
                  {"e_p2", n.cut->e_p2},
                  {"distance", n.cut->distance},
                  {"upstream", n.upstream},
                  {"downstream", n.downstream}};
    }
    nodes.push_back(std::move(j));
  }
  json doc = {{"format", "qfrag-tree"},
              {"format_version", 1},
              {"threshold", tree.threshold},
              {"max_cuts", tree.max_cuts},
              {"max_depth", tree.max_depth},
              {"nodes", nodes}};
  return doc.dump(1) + "\n";
}

FragmentationTree tree_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "qfrag-tree") throw FragmentError("not a fragmentation tree document");
    FragmentationTree tree;
    tree.threshold = doc.at("threshold").get<double>();
    tree.max_cuts = doc.at("max_cuts").get<int>();
    tree.max_depth = doc.at("max_depth").get<int>();
    for (const auto& j : doc.at("nodes")) {
      FragmentNode n;
      n.id = j.at("id").get<int>();
      if (n.id != static_cast<int>(tree.nodes.size())) throw FragmentError("tree node ids must be consecutive");
      n.parent = j.at("parent").get<int>();
      n.depth = j.at("depth").get<int>();
      n.wires = j.at("wires").get<std::vector<int>>();
      n.root_wires = j.at("root_wires").get<std::vector<int>>();
      n.predicted_error = j.at("predicted_error").get<double>();
      n.unsplittable = j.value("unsplittable", false);
      n.reason = j.value("reason", "");
      n.circuit = parse_qasm(j.at("qasm").get<std::string>());
      n.circuit.set_name(j.value("name", ""));
      if (j.contains("cut")) {
        const auto& cj = j.at("cut");
        std::vector<WireCutPoint> pts;
        for (const auto& p : cj.at("points")) pts.push_back({p.at("qubit").get<int>(), p.at("after_gate").get<int>()});
        auto cand = make_cut(n.circuit, pts);
        if (!cand) throw FragmentError("tree node " + std::to_string(n.id) + " has an invalid cut");
        n.cut = ScoredCut(std::move(*cand), cj.at("e_p1").get<double>(), cj.at("e_p2").get<double>());
        n.upstream = cj.at("upstream").get<int>();
        n.downstream = cj.at("downstream").get<int>();
      }
      tree.nodes.push_back(std::move(n));
    }
    if (tree.nodes.empty()) throw FragmentError("tree has no nodes");
    for (const auto& n : tree.nodes) {
      if (!n.cut) continue;
      const auto count = static_cast<int>(tree.nodes.size());
      if (n.upstream <= n.id || n.upstream >= count || n.downstream <= n.id || n.downstream >= count) {
        throw FragmentError("tree node " + std::to_string(n.id) + " has invalid children");
      }
      if (!(tree.nodes[static_cast<std::size_t>(n.upstream)].circuit == n.cut->candidate.upstream.circuit) ||
          !(tree.nodes[static_cast<std::size_t>(n.downstream)].circuit == n.cut->candidate.downstream.circuit)) {
        throw FragmentError("tree node " + std::to_string(n.id) + " children do not match its cut");
      }
    }
    return tree;
  } catch (const json::exception& e) {
    throw FragmentError(std::string("malformed tree document: ") + e.what());
  }
}

}  // namespace qfrag
