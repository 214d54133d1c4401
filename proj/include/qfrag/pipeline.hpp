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
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfrag/features.hpp"
#include "qfrag/fragment.hpp"
#include "qfrag/learn/model.hpp"
#include "qfrag/metrics.hpp"
#include "qfrag/reconstruct.hpp"
#include "qfrag/simulator.hpp"

namespace qfrag {

/// Process exit codes of the command-line tool.
enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  Usage = 2,
  Parse = 3,
  Model = 4,
  Execution = 5,
  Config = 6,
};

ExitCode exit_code_for(const std::exception& e);

/// "module: message" for toolchain errors, the plain message otherwise.
std::string tagged_message(const std::exception& e);

enum class Backend { Exact, NoisyShots };

const char* backend_name(Backend b);        // "exact", "noisy-shots"
Backend backend_from_name(std::string_view name);

/// QFRAG_BACKEND, when set and nonempty, replaces the configured backend.
Backend resolve_backend(Backend configured);

struct RunConfig {
  std::filesystem::path circuit;
  std::filesystem::path model;  // empty: constant-zero predictor
  std::filesystem::path noise;  // empty: default noise model
  std::filesystem::path out_dir;
  double threshold = 50.0;
  int max_cuts = 2;
  int max_depth = 8;
  std::uint64_t shots = 128;
  std::uint64_t seed = 0;
  Backend backend = Backend::NoisyShots;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  FragmentOptions fragment_options() const { return {threshold, max_cuts, max_depth}; }
};

/// Noise from the config file (or the default model) with its seed
/// replaced by the run seed.
NoiseModel resolve_noise(const RunConfig& config);

ExecutionMode execution_mode(const RunConfig& config, const NoiseModel& noise);

/// Caches a feature-based predictor by feature vector.
ErrorPredictor memoized_predictor(std::function<double(const FeatureVector&)> predict);
ErrorPredictor model_predictor(const learn::TrainedModel& model);

struct PhaseTimes {
  double fragment_seconds = 0.0;
  double execute_seconds = 0.0;
  double reference_seconds = 0.0;
};

struct RunResult {
  QuantumCircuit circuit;
  FragmentationTree tree;
  FoldResult fold;
  std::optional<OutcomeDistribution> ideal;     // when the circuit fits the simulator
  std::optional<ErrorReport> reconstructed;     // fold result vs ideal
  std::optional<ErrorReport> direct;            // unfragmented execution vs ideal
  std::map<int, double> leaf_measured_error;    // E_mean of each leaf run alone
  std::optional<double> reduction_percent;      // undefined when the direct error is 0
  PhaseTimes times;
};

/// Fragments, executes and reconstructs one circuit.
RunResult run_circuit(const QuantumCircuit& circuit, const ErrorPredictor& predictor, const RunConfig& config,
                      const NoiseModel& noise);

/// Deterministic report document; wall-clock data lives in timing_json.
std::string report_json(const RunResult& result, const RunConfig& config, const NoiseModel& noise);
std::string timing_json(const RunResult& result);

/// Writes tree.json, distribution.csv, report.json and timing.json.
void write_run_outputs(const RunResult& result, const RunConfig& config, const NoiseModel& noise,
                       const std::filesystem::path& dir);

/// Loads the circuit, model and noise named by the config, runs it and
/// writes the outputs when out_dir is set.
RunResult run_pipeline(const RunConfig& config);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct BenchRow {
  std::string name;
  int n_qubits = 0;
  std::size_t leaves = 0;
  double full_error = 0.0;            // E_mean of direct execution
  double reconstructed_error = 0.0;   // E_mean of the fold
  double full_fidelity = 1.0;
  double reconstructed_fidelity = 1.0;
  std::optional<double> reduction_percent;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::optional<double> mean_reduction;  // over rows where it is defined
  std::size_t improved = 0;              // rows with reconstructed <= full error

  std::string csv() const;
  std::string table() const;
};

BenchReport bench_report(const std::vector<QuantumCircuit>& corpus, const ErrorPredictor& predictor,
                         const RunConfig& config, const NoiseModel& noise);

}  // namespace qfrag
