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
#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "qfrag/circuit.hpp"
#include "qfrag/distribution.hpp"

namespace qfrag {

using Complex = std::complex<double>;

/// Dense row-major matrix of a gate. For gate operands (q0, q1, ...) the
/// first operand is the most significant bit of the matrix index.
struct GateMatrix {
  int dim = 0;
  std::vector<Complex> data;

  Complex operator()(int r, int c) const { return data[static_cast<std::size_t>(r * dim + c)]; }
};

GateMatrix gate_matrix(const Gate& gate);

/// Pure-state simulator over 2^n amplitudes; amplitude index bit i is wire i.
class StateVector {
 public:
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }

  void apply(const Gate& gate);
  void apply_matrix(const std::vector<int>& qubits, const GateMatrix& m);
  void apply_pauli(int qubit, int pauli);  // 1 = X, 2 = Y, 3 = Z

  std::vector<double> probabilities() const;

 private:
  int n_;
  std::vector<Complex> amps_;
};

enum class Basis : std::uint8_t { X, Y, Z };
enum class InitState : std::uint8_t { Zero, One, Plus, PlusI };

inline constexpr std::array<Basis, 3> kAllBases = {Basis::X, Basis::Y, Basis::Z};
inline constexpr std::array<InitState, 4> kAllInitStates = {InitState::Zero, InitState::One, InitState::Plus,
                                                            InitState::PlusI};

char basis_name(Basis b);
const char* init_state_name(InitState s);

/// Terminating measurement bases and non-|0> preparations for cut wires.
/// A wire may carry both (a fragment that receives a cut wire and is later
/// measured in a rotated basis for an enclosing cut).
struct CutBoundarySpec {
  std::map<int, Basis> measure_bases;
  std::map<int, InitState> init_states;

  bool empty() const { return measure_bases.empty() && init_states.empty(); }
  void validate(int n_qubits) const;
};

/// Circuit with preparation gates prepended (|1>: x, |+>: h, |+i>: h,s) and
/// basis-change gates appended (X: h, Y: sdg,h, Z: none). Pseudo-ops dropped.
QuantumCircuit with_boundary(const QuantumCircuit& circuit, const CutBoundarySpec& boundary);

/// Stochastic Pauli noise after every gate plus a readout bit flip.
struct NoiseModel {
  double p1 = 0.002;   // per wire, after 1-qubit gates
  double p2 = 0.02;    // per wire, after 2- and 3-qubit gates
  double p_ro = 0.03;  // per measured bit
  std::uint64_t seed = 0;

  static NoiseModel noiseless() { return {0.0, 0.0, 0.0, 0}; }
  void validate() const;
};

/// Accepts a JSON object or `key = value` lines with keys p1, p2, p_ro, seed.
NoiseModel parse_noise_model(std::string_view text);
NoiseModel load_noise_model(const std::filesystem::path& path);

struct SimulatorOptions {
  int max_qubits = 20;
};

OutcomeDistribution simulate_ideal(const QuantumCircuit& circuit, const CutBoundarySpec& boundary = {},
                                   const SimulatorOptions& options = {});

/// Counts-normalized distribution over `shots` trajectories. Shot k draws
/// from a generator seeded by (noise.seed, k), so results depend only on the
/// inputs.
OutcomeDistribution simulate_noisy(const QuantumCircuit& circuit, const NoiseModel& noise, std::uint64_t shots,
                                   const CutBoundarySpec& boundary = {}, const SimulatorOptions& options = {});

struct ExecutionMode {
  enum class Kind { Exact, Shots };
  Kind kind = Kind::Exact;
  std::uint64_t shots = 0;
  NoiseModel noise = NoiseModel::noiseless();
  SimulatorOptions options{};

  static ExecutionMode exact() { return {}; }
  static ExecutionMode noisy(std::uint64_t shots, NoiseModel noise) { return {Kind::Shots, shots, noise, {}}; }

  bool is_exact() const { return kind == Kind::Exact; }

  /// Same mode with the noise seed mixed with `salt`, giving an independent
  /// but reproducible stream for each distinct run.
  ExecutionMode derived(std::uint64_t salt) const;
};

OutcomeDistribution execute(const QuantumCircuit& circuit, const CutBoundarySpec& boundary, const ExecutionMode& mode);

/// Outcomes split into (non-cut output bits, cut-wire bits). Output bits are
/// packed in increasing wire order over `output_wires`; cut bits likewise
/// over `cut_wires`.
struct JointOutcomes {
  std::vector<int> output_wires;
  std::vector<int> cut_wires;
  std::map<std::pair<Bits, Bits>, double> probs;
};

JointOutcomes split_outcomes(const OutcomeDistribution& dist, const std::vector<int>& cut_wires);

/// Executes the circuit with the boundary and separates the bits of the
/// wires in boundary.measure_bases from the rest.
JointOutcomes expectation_terms(const QuantumCircuit& circuit, const CutBoundarySpec& boundary,
                                const ExecutionMode& mode);

/// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace qfrag
