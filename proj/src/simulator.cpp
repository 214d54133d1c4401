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

#include "qfrag/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "qfrag/error.hpp"

namespace qfrag {

namespace {

using namespace std::complex_literals;

GateMatrix one_qubit(Complex a, Complex b, Complex c, Complex d) { return {2, {a, b, c, d}}; }

GateMatrix diagonal(std::vector<Complex> diag) {
  const int dim = static_cast<int>(diag.size());
  GateMatrix m{dim, std::vector<Complex>(static_cast<std::size_t>(dim * dim), 0.0)};
  for (int i = 0; i < dim; ++i) m.data[static_cast<std::size_t>(i * dim + i)] = diag[i];
  return m;
}

GateMatrix permutation(const std::vector<int>& image) {
  const int dim = static_cast<int>(image.size());
  GateMatrix m{dim, std::vector<Complex>(static_cast<std::size_t>(dim * dim), 0.0)};
  for (int c = 0; c < dim; ++c) m.data[static_cast<std::size_t>(image[c] * dim + c)] = 1.0;
  return m;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_index(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

void check_width(const QuantumCircuit& circuit, const SimulatorOptions& options) {
  if (circuit.n_qubits() > options.max_qubits) {
    throw SimulationError("circuit has " + std::to_string(circuit.n_qubits()) + " qubits; limit is " +
                          std::to_string(options.max_qubits));
  }
}

double noise_probability(const Gate& g, const NoiseModel& noise) {
  return g.qubits.size() == 1 ? noise.p1 : noise.p2;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GateMatrix gate_matrix(const Gate& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (g.kind) {
    case GateKind::H: return one_qubit(r, r, r, -r);
    case GateKind::X: return one_qubit(0.0, 1.0, 1.0, 0.0);
    case GateKind::Y: return one_qubit(0.0, -1i, 1i, 0.0);
    case GateKind::Z: return diagonal({1.0, -1.0});
    case GateKind::S: return diagonal({1.0, 1i});
    case GateKind::SDG: return diagonal({1.0, -1i});
    case GateKind::T: return diagonal({1.0, std::polar(1.0, std::numbers::pi / 4)});
    case GateKind::TDG: return diagonal({1.0, std::polar(1.0, -std::numbers::pi / 4)});
    case GateKind::RX: {
      const double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
      return one_qubit(c, -1i * s, -1i * s, c);
    }
    case GateKind::RY: {
      const double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
      return one_qubit(c, -s, s, c);
    }
    case GateKind::RZ:
      return diagonal({std::polar(1.0, -g.params[0] / 2), std::polar(1.0, g.params[0] / 2)});
    case GateKind::U3: {
      const double theta = g.params[0], phi = g.params[1], lambda = g.params[2];
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      return one_qubit(c, -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda));
    }
    case GateKind::CNOT: return permutation({0, 1, 3, 2});
    case GateKind::CZ: return diagonal({1.0, 1.0, 1.0, -1.0});
    case GateKind::CP: return diagonal({1.0, 1.0, 1.0, std::polar(1.0, g.params[0])});
    case GateKind::SWAP: return permutation({0, 2, 1, 3});
    case GateKind::TOFFOLI: return permutation({0, 1, 2, 3, 4, 5, 7, 6});
    case GateKind::MEASURE:
    case GateKind::BARRIER: break;
  }
  throw SimulationError("no matrix for pseudo-op '" + std::string(gate_info(g.kind).name) + "'");
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) throw SimulationError("statevector width out of range");
  amps_.assign(std::size_t{1} << n_qubits, 0.0);
  amps_[0] = 1.0;
}

void StateVector::apply(const Gate& gate) {
  if (gate.is_pseudo()) return;
  apply_matrix(gate.qubits, gate_matrix(gate));
}

void StateVector::apply_matrix(const std::vector<int>& qubits, const GateMatrix& m) {
  const int k = static_cast<int>(qubits.size());
  const int dim = 1 << k;
  if (m.dim != dim) throw SimulationError("matrix dimension does not match operand count");
  std::vector<std::size_t> offsets(static_cast<std::size_t>(dim), 0);
  std::size_t mask = 0;
  for (int local = 0; local < dim; ++local) {
    std::size_t off = 0;
    for (int j = 0; j < k; ++j) {
      if ((local >> (k - 1 - j)) & 1) off |= std::size_t{1} << qubits[j];
    }
    offsets[local] = off;
  }
  for (int q : qubits) mask |= std::size_t{1} << q;
  std::vector<Complex> in(static_cast<std::size_t>(dim));
  for (std::size_t base = 0; base < amps_.size(); ++base) {
    if (base & mask) continue;
    for (int r = 0; r < dim; ++r) in[r] = amps_[base | offsets[r]];
    for (int r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c < dim; ++c) acc += m.data[static_cast<std::size_t>(r * dim + c)] * in[c];
      amps_[base | offsets[r]] = acc;
    }
  }
}

void StateVector::apply_pauli(int qubit, int pauli) {
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    Complex& a0 = amps_[i];
    Complex& a1 = amps_[i | bit];
    switch (pauli) {
      case 1: std::swap(a0, a1); break;
      case 2: {
        const Complex t = a0;
        a0 = -1i * a1;
        a1 = 1i * t;
        break;
      }
      case 3: a1 = -a1; break;
      default: throw SimulationError("pauli index must be 1, 2 or 3");
    }
  }
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

char basis_name(Basis b) {
  switch (b) {
    case Basis::X: return 'X';
    case Basis::Y: return 'Y';
    case Basis::Z: return 'Z';
  }
  return '?';
}

const char* init_state_name(InitState s) {
  switch (s) {
    case InitState::Zero: return "0";
    case InitState::One: return "1";
    case InitState::Plus: return "+";
    case InitState::PlusI: return "+i";
  }
  return "?";
}

void CutBoundarySpec::validate(int n_qubits) const {
  for (const auto& [q, b] : measure_bases) {
    if (q < 0 || q >= n_qubits) throw SimulationError("boundary measure wire " + std::to_string(q) + " out of range");
  }
  for (const auto& [q, s] : init_states) {
    if (q < 0 || q >= n_qubits) throw SimulationError("boundary init wire " + std::to_string(q) + " out of range");
  }
}

QuantumCircuit with_boundary(const QuantumCircuit& circuit, const CutBoundarySpec& boundary) {
  boundary.validate(circuit.n_qubits());
  QuantumCircuit out(circuit.n_qubits(), circuit.name());
  for (const auto& [q, s] : boundary.init_states) {
    switch (s) {
      case InitState::Zero: break;
      case InitState::One: out.add(GateKind::X, {q}); break;
      case InitState::Plus: out.add(GateKind::H, {q}); break;
      case InitState::PlusI:
        out.add(GateKind::H, {q});
        out.add(GateKind::S, {q});
        break;
    }
  }
  for (const Gate& g : circuit.gates()) {
    if (!g.is_pseudo()) out.add(g);
  }
  for (const auto& [q, b] : boundary.measure_bases) {
    switch (b) {
      case Basis::X: out.add(GateKind::H, {q}); break;
      case Basis::Y:
        out.add(GateKind::SDG, {q});
        out.add(GateKind::H, {q});
        break;
      case Basis::Z: break;
    }
  }
  return out;
}

void NoiseModel::validate() const {
  auto check = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string("noise parameter ") + name + " must be in [0, 1]");
  };
  check(p1, "p1");
  check(p2, "p2");
  check(p_ro, "p_ro");
}

NoiseModel parse_noise_model(std::string_view text) {
  NoiseModel m;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("noise config: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "p1") m.p1 = value.get<double>();
      else if (key == "p2") m.p2 = value.get<double>();
      else if (key == "p_ro") m.p_ro = value.get<double>();
      else if (key == "seed") m.seed = value.get<std::uint64_t>();
      else throw ConfigError("noise config: unknown key '" + key + "'");
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto eq = line.find_first_of("=:");
      if (eq == std::string::npos) throw ConfigError("noise config line " + std::to_string(lineno) + ": expected key = value");
      auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      const std::string key = strip(line.substr(0, eq));
      const std::string value = strip(line.substr(eq + 1));
      try {
        if (key == "p1") m.p1 = std::stod(value);
        else if (key == "p2") m.p2 = std::stod(value);
        else if (key == "p_ro") m.p_ro = std::stod(value);
        else if (key == "seed") m.seed = std::stoull(value);
        else throw ConfigError("noise config: unknown key '" + key + "'");
      } catch (const std::logic_error&) {
        throw ConfigError("noise config line " + std::to_string(lineno) + ": bad value '" + value + "'");
      }
    }
  }
  m.validate();
  return m;
}

NoiseModel load_noise_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open noise config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_noise_model(ss.str());
}

OutcomeDistribution simulate_ideal(const QuantumCircuit& circuit, const CutBoundarySpec& boundary,
                                   const SimulatorOptions& options) {
  check_width(circuit, options);
  const QuantumCircuit full = with_boundary(circuit, boundary);
  StateVector sv(full.n_qubits());
  for (const Gate& g : full.gates()) sv.apply(g);
  const auto p = sv.probabilities();
  OutcomeDistribution d(full.n_qubits());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 1e-15) d.set(i, p[i]);
  }
  d.normalize();
  return d;
}

OutcomeDistribution simulate_noisy(const QuantumCircuit& circuit, const NoiseModel& noise, std::uint64_t shots,
                                   const CutBoundarySpec& boundary, const SimulatorOptions& options) {
  if (shots == 0) throw SimulationError("shots must be at least 1");
  noise.validate();
  check_width(circuit, options);
  const QuantumCircuit full = with_boundary(circuit, boundary);
  const int n = full.n_qubits();
  const auto& gates = full.gates();

  std::vector<GateMatrix> matrices;
  matrices.reserve(gates.size());
  StateVector clean(n);
  for (const Gate& g : gates) {
    matrices.push_back(gate_matrix(g));
    clean.apply_matrix(g.qubits, matrices.back());
  }
  auto cumulative = clean.probabilities();
  for (std::size_t i = 1; i < cumulative.size(); ++i) cumulative[i] += cumulative[i - 1];

  struct Fault {
    std::size_t gate;
    int qubit;
    int pauli;
  };
  std::vector<Fault> faults;
  std::map<Bits, std::uint64_t> counts;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    std::mt19937_64 rng(mix_seed(noise.seed, shot));
    faults.clear();
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      const double p = noise_probability(gates[gi], noise);
      if (p <= 0.0) continue;
      for (int q : gates[gi].qubits) {
        if (uniform01(rng) < p) faults.push_back({gi, q, 1 + static_cast<int>(rng() % 3)});
      }
    }
    Bits outcome;
    if (faults.empty()) {
      outcome = sample_index(cumulative, uniform01(rng));
    } else {
      StateVector sv(n);
      std::size_t next = 0;
      for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        sv.apply_matrix(gates[gi].qubits, matrices[gi]);
        for (; next < faults.size() && faults[next].gate == gi; ++next) sv.apply_pauli(faults[next].qubit, faults[next].pauli);
      }
      auto cum = sv.probabilities();
      for (std::size_t i = 1; i < cum.size(); ++i) cum[i] += cum[i - 1];
      outcome = sample_index(cum, uniform01(rng));
    }
    if (noise.p_ro > 0.0) {
      for (int q = 0; q < n; ++q) {
        if (uniform01(rng) < noise.p_ro) outcome ^= Bits{1} << q;
      }
    }
    ++counts[outcome];
  }
  return OutcomeDistribution::from_counts(n, counts);
}

ExecutionMode ExecutionMode::derived(std::uint64_t salt) const {
  ExecutionMode m = *this;
  m.noise.seed = mix_seed(noise.seed, salt);
  return m;
}

OutcomeDistribution execute(const QuantumCircuit& circuit, const CutBoundarySpec& boundary, const ExecutionMode& mode) {
  if (mode.is_exact()) return simulate_ideal(circuit, boundary, mode.options);
  return simulate_noisy(circuit, mode.noise, mode.shots, boundary, mode.options);
}

JointOutcomes split_outcomes(const OutcomeDistribution& dist, const std::vector<int>& cut_wires) {
  JointOutcomes out;
  out.cut_wires = cut_wires;
  std::sort(out.cut_wires.begin(), out.cut_wires.end());
  for (int q = 0; q < dist.n_bits(); ++q) {
    if (!std::binary_search(out.cut_wires.begin(), out.cut_wires.end(), q)) out.output_wires.push_back(q);
  }
  for (const auto& [key, p] : dist.probs()) {
    Bits o = 0, c = 0;
    for (std::size_t i = 0; i < out.output_wires.size(); ++i) o |= ((key >> out.output_wires[i]) & 1U) << i;
    for (std::size_t i = 0; i < out.cut_wires.size(); ++i) c |= ((key >> out.cut_wires[i]) & 1U) << i;
    out.probs[{o, c}] += p;
  }
  return out;
}

JointOutcomes expectation_terms(const QuantumCircuit& circuit, const CutBoundarySpec& boundary,
                                const ExecutionMode& mode) {
  if (boundary.measure_bases.empty()) throw SimulationError("expectation_terms needs at least one measured cut wire");
  std::vector<int> cuts;
  for (const auto& [q, b] : boundary.measure_bases) cuts.push_back(q);
  return split_outcomes(execute(circuit, boundary, mode), cuts);
}

}  // namespace qfrag
