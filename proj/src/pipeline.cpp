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

#include "qfrag/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "qfrag/error.hpp"
#include "qfrag/qasm.hpp"

namespace qfrag {

using nlohmann::json;

namespace {

constexpr std::uint64_t kLeafSalt = 0x6c656166;  // independent stream for lone leaf runs
constexpr std::uint64_t kBenchSalt = 0x62656e63;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

json error_json(const std::optional<ErrorReport>& r) {
  if (!r) return nullptr;
  return {{"e_mean", r->e_mean}, {"e_rmse", r->e_rmse}, {"hellinger_fidelity", r->hellinger_fidelity},
          {"n_states", r->n_states}};
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const CircuitError*>(&e)) return ExitCode::Parse;
  if (dynamic_cast<const ModelError*>(&e)) return ExitCode::Model;
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::Config;
  if (dynamic_cast<const SimulationError*>(&e) || dynamic_cast<const FragmentError*>(&e) ||
      dynamic_cast<const ReconstructError*>(&e) || dynamic_cast<const MetricError*>(&e)) {
    return ExitCode::Execution;
  }
  return ExitCode::Internal;
}

std::string tagged_message(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->module() + ": " + err->what();
  return e.what();
}

const char* backend_name(Backend b) { return b == Backend::Exact ? "exact" : "noisy-shots"; }

Backend backend_from_name(std::string_view name) {
  if (name == "exact") return Backend::Exact;
  if (name == "noisy-shots" || name == "noisy" || name == "shots") return Backend::NoisyShots;
  throw ConfigError("unknown backend '" + std::string(name) + "' (expected exact or noisy-shots)");
}

Backend resolve_backend(Backend configured) {
  const char* env = std::getenv("QFRAG_BACKEND");
  if (!env || !*env) return configured;
  return backend_from_name(env);
}

void RunConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 100.0)) throw ConfigError("threshold must lie in (0, 100]");
  if (max_cuts < 1) throw ConfigError("max-cut K must be at least 1");
  if (max_depth < 0) throw ConfigError("max depth must be nonnegative");
  if (shots < 1) throw ConfigError("shots must be at least 1");
}

NoiseModel resolve_noise(const RunConfig& config) {
  NoiseModel noise = config.noise.empty() ? NoiseModel{} : load_noise_model(config.noise);
  noise.seed = config.seed;
  noise.validate();
  return noise;
}

ExecutionMode execution_mode(const RunConfig& config, const NoiseModel& noise) {
  return config.backend == Backend::Exact ? ExecutionMode::exact() : ExecutionMode::noisy(config.shots, noise);
}

ErrorPredictor memoized_predictor(std::function<double(const FeatureVector&)> predict) {
  auto cache = std::make_shared<std::map<FeatureVector, double>>();
  return [cache, predict = std::move(predict)](const QuantumCircuit& c) {
    const FeatureVector fv = extract_features(c);
    const auto it = cache->find(fv);
    if (it != cache->end()) return it->second;
    const double v = predict(fv);
    cache->emplace(fv, v);
    return v;
  };
}

ErrorPredictor model_predictor(const learn::TrainedModel& model) {
  return memoized_predictor([model](const FeatureVector& fv) { return learn::predict_error(model, fv); });
}

RunResult run_circuit(const QuantumCircuit& circuit, const ErrorPredictor& predictor, const RunConfig& config,
                      const NoiseModel& noise) {
  config.validate();
  RunResult r;
  r.circuit = circuit.without_pseudo_ops();
  r.circuit.set_name(circuit.name());
  const ExecutionMode mode = execution_mode(config, noise);

  auto t = Clock::now();
  r.tree = fragment_recursively(r.circuit, predictor, config.fragment_options());
  r.times.fragment_seconds = seconds_since(t);

  t = Clock::now();
  r.fold = fold_tree(r.tree, mode);
  r.times.execute_seconds = seconds_since(t);

  t = Clock::now();
  if (r.circuit.n_qubits() <= mode.options.max_qubits) {
    r.ideal = simulate_ideal(r.circuit, {}, mode.options);
    r.reconstructed = error_report(*r.ideal, r.fold.distribution);
    const auto direct = r.tree.nodes.size() == 1 ? r.fold.distribution : execute(r.circuit, {}, mode);
    r.direct = error_report(*r.ideal, direct);
    if (r.direct->e_mean > 1e-12) {
      r.reduction_percent = (r.direct->e_mean - r.reconstructed->e_mean) / r.direct->e_mean * 100.0;
    }
  }
  for (int id : r.tree.leaves()) {
    const auto& leaf = r.tree.nodes[static_cast<std::size_t>(id)];
    if (mode.is_exact()) {
      r.leaf_measured_error[id] = 0.0;
      continue;
    }
    const auto noisy = execute(leaf.circuit, {}, mode.derived(mix_seed(kLeafSalt, static_cast<std::uint64_t>(id))));
    r.leaf_measured_error[id] = mean_abs_error(simulate_ideal(leaf.circuit, {}, mode.options), noisy);
  }
  r.times.reference_seconds = seconds_since(t);
  return r;
}

std::string report_json(const RunResult& r, const RunConfig& config, const NoiseModel& noise) {
  json leaves = json::array();
  for (int id : r.tree.leaves()) {
    const auto& n = r.tree.nodes[static_cast<std::size_t>(id)];
    json j = {{"id", id},
              {"depth", n.depth},
              {"n_qubits", n.circuit.n_qubits()},
              {"gates", n.circuit.size()},
              {"root_wires", n.root_wires},
              {"predicted_error", n.predicted_error},
              {"measured_error", r.leaf_measured_error.count(id) ? json(r.leaf_measured_error.at(id)) : json(nullptr)},
              {"unsplittable", n.unsplittable}};
    if (n.unsplittable) j["reason"] = n.reason;
    leaves.push_back(std::move(j));
  }
  json splits = json::array();
  for (const auto& n : r.tree.nodes) {
    if (n.is_leaf()) continue;
    splits.push_back({{"id", n.id},
                      {"depth", n.depth},
                      {"predicted_error", n.predicted_error},
                      {"label", n.cut->candidate.label()},
                      {"cut_wires", n.cut->candidate.cut_wires},
                      {"e_p1", n.cut->e_p1},
                      {"e_p2", n.cut->e_p2},
                      {"distance", n.cut->distance}});
  }
  json warnings = json::array();
  for (int id : r.fold.unsplittable_leaves) {
    warnings.push_back("leaf " + std::to_string(id) + " is above threshold: " +
                       r.tree.nodes[static_cast<std::size_t>(id)].reason);
  }
  json doc = {
      {"format", "qfrag-report"},
      {"format_version", 1},
      {"circuit",
       {{"name", r.circuit.name()}, {"n_qubits", r.circuit.n_qubits()}, {"gates", r.circuit.size()},
        {"depth", depth(r.circuit)}}},
      {"config",
       {{"threshold", config.threshold},
        {"max_cuts", config.max_cuts},
        {"max_depth", config.max_depth},
        {"shots", config.shots},
        {"seed", config.seed},
        {"backend", backend_name(config.backend)},
        {"noise", {{"p1", noise.p1}, {"p2", noise.p2}, {"p_ro", noise.p_ro}, {"seed", noise.seed}}}}},
      {"bit_order", "character i of a bitstring is wire q[i]"},
      {"root_predicted_error", r.tree.root().predicted_error},
      {"split_count", r.tree.split_count()},
      {"splits", splits},
      {"leaves", leaves},
      {"executions", r.fold.executions},
      {"clipped_mass", r.fold.clipped_mass},
      {"reconstructed", error_json(r.reconstructed)},
      {"direct", error_json(r.direct)},
      {"reduction_percent", opt_json(r.reduction_percent)},
      {"warnings", warnings},
  };
  return doc.dump(1) + "\n";
}

std::string timing_json(const RunResult& r) {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  json doc = {{"finished_at", stamp.str()},
              {"fragment_seconds", r.times.fragment_seconds},
              {"execute_seconds", r.times.execute_seconds},
              {"reference_seconds", r.times.reference_seconds},
              {"total_seconds", r.times.fragment_seconds + r.times.execute_seconds + r.times.reference_seconds}};
  return doc.dump(1) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_run_outputs(const RunResult& r, const RunConfig& config, const NoiseModel& noise,
                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  std::ostringstream csv;
  write_distribution_csv(csv, r.fold.distribution);
  write_file_atomic(dir / "tree.json", tree_to_json(r.tree));
  write_file_atomic(dir / "distribution.csv", csv.str());
  write_file_atomic(dir / "report.json", report_json(r, config, noise));
  write_file_atomic(dir / "timing.json", timing_json(r));
}

RunResult run_pipeline(const RunConfig& config) {
  config.validate();
  const NoiseModel noise = resolve_noise(config);
  const QuantumCircuit circuit = parse_qasm_file(config.circuit);
  const learn::TrainedModel model = config.model.empty() ? learn::zero_model() : learn::load_model(config.model);
  RunResult r = run_circuit(circuit, model_predictor(model), config, noise);
  if (!config.out_dir.empty()) write_run_outputs(r, config, noise, config.out_dir);
  return r;
}

BenchReport bench_report(const std::vector<QuantumCircuit>& corpus, const ErrorPredictor& predictor,
                         const RunConfig& config, const NoiseModel& noise) {
  BenchReport report;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    NoiseModel n = noise;
    n.seed = mix_seed(mix_seed(noise.seed, kBenchSalt), i);
    const RunResult r = run_circuit(corpus[i], predictor, config, n);
    if (!r.ideal) throw SimulationError("bench circuit '" + corpus[i].name() + "' is too wide for the simulator");
    BenchRow row;
    row.name = corpus[i].name().empty() ? "circuit" + std::to_string(i) : corpus[i].name();
    row.n_qubits = r.circuit.n_qubits();
    row.leaves = r.tree.leaves().size();
    row.full_error = r.direct->e_mean;
    row.reconstructed_error = r.reconstructed->e_mean;
    row.full_fidelity = r.direct->hellinger_fidelity;
    row.reconstructed_fidelity = r.reconstructed->hellinger_fidelity;
    row.reduction_percent = r.reduction_percent;
    if (row.reduction_percent) {
      sum += *row.reduction_percent;
      ++defined;
    }
    if (row.leaves > 1 && row.reconstructed_error <= row.full_error) ++report.improved;
    report.rows.push_back(std::move(row));
  }
  if (defined > 0) report.mean_reduction = sum / static_cast<double>(defined);
  return report;
}

std::string BenchReport::csv() const {
  std::string out = "circuit,n_qubits,leaves,full_error,reconstructed_error,full_fidelity,reconstructed_fidelity,"
                    "reduction_percent\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%zu,%.17g,%.17g,%.17g,%.17g,", r.name.c_str(), r.n_qubits, r.leaves,
                  r.full_error, r.reconstructed_error, r.full_fidelity, r.reconstructed_fidelity);
    out += buf;
    if (r.reduction_percent) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.reduction_percent);
      out += buf;
    } else {
      out += "n/a";
    }
    out += "\n";
  }
  return out;
}

std::string BenchReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(20) << "circuit" << std::right << std::setw(7) << "qubits" << std::setw(8) << "leaves"
      << std::setw(12) << "full err" << std::setw(12) << "recon err" << std::setw(10) << "full F" << std::setw(10)
      << "recon F" << std::setw(12) << "reduction" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(20) << r.name << std::right << std::setw(7) << r.n_qubits << std::setw(8) << r.leaves
        << std::setw(12) << fixed(r.full_error, 3) << std::setw(12) << fixed(r.reconstructed_error, 3) << std::setw(10)
        << fixed(r.full_fidelity, 3) << std::setw(10) << fixed(r.reconstructed_fidelity, 3) << std::setw(12)
        << (r.reduction_percent ? fixed(*r.reduction_percent, 2) + "%" : std::string("n/a")) << "\n";
  }
  out << "mean reduction: " << (mean_reduction ? fixed(*mean_reduction, 3) + "%" : std::string("n/a"))
      << ", reconstructed error not above full error on " << improved << " of " << rows.size() << " circuits\n";
  return out.str();
}

}  // namespace qfrag
