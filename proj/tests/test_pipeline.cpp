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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "qfrag/error.hpp"
#include "qfrag/learn/dataset.hpp"
#include "qfrag/learn/train.hpp"
#include "qfrag/pipeline.hpp"
#include "qfrag/qasm.hpp"

using namespace qfrag;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qfrag_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Linear model predicting 12 percent per qubit and nothing else.
learn::TrainedModel per_qubit_model() {
  auto model = learn::zero_model();
  std::get<learn::LinearModel>(model.params).weights(0) = 12.0;
  return model;
}

}  // namespace

TEST_CASE("exit codes follow the error taxonomy") {
  CHECK(exit_code_for(ParseError(3, "x")) == ExitCode::Parse);
  CHECK(exit_code_for(UnsupportedGateError(3, "id")) == ExitCode::Parse);
  CHECK(exit_code_for(CircuitError("x")) == ExitCode::Parse);
  CHECK(exit_code_for(ModelError("x")) == ExitCode::Model);
  CHECK(exit_code_for(SimulationError("x")) == ExitCode::Execution);
  CHECK(exit_code_for(ReconstructError("x")) == ExitCode::Execution);
  CHECK(exit_code_for(FragmentError("x")) == ExitCode::Execution);
  CHECK(exit_code_for(ConfigError("x")) == ExitCode::Config);
  CHECK(exit_code_for(std::runtime_error("x")) == ExitCode::Internal);
  CHECK(tagged_message(ModelError("bad")) == "learn: bad");
}

TEST_CASE("run config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.threshold = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.threshold = 100.0;
  CHECK_NOTHROW(c.validate());
  c.max_cuts = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.max_cuts = 2;
  c.shots = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("backend names and environment override") {
  CHECK(backend_from_name("exact") == Backend::Exact);
  CHECK(backend_from_name("noisy-shots") == Backend::NoisyShots);
  CHECK_THROWS_AS(backend_from_name("gpu"), ConfigError);
  ::unsetenv("QFRAG_BACKEND");
  CHECK(resolve_backend(Backend::NoisyShots) == Backend::NoisyShots);
  ::setenv("QFRAG_BACKEND", "exact", 1);
  CHECK(resolve_backend(Backend::NoisyShots) == Backend::Exact);
  ::setenv("QFRAG_BACKEND", "nonsense", 1);
  CHECK_THROWS_AS(resolve_backend(Backend::Exact), ConfigError);
  ::unsetenv("QFRAG_BACKEND");
}

TEST_CASE("predictor memoization calls the model once per feature vector") {
  int calls = 0;
  const auto pred = memoized_predictor([&](const FeatureVector& fv) {
    ++calls;
    return static_cast<double>(fv.n_qubits);
  });
  CHECK(pred(fixture::bell()) == 2.0);
  CHECK(pred(fixture::bell()) == 2.0);
  CHECK(pred(fixture::ghz3()) == 3.0);
  CHECK(calls == 2);
}

TEST_CASE("zero predictor runs the circuit directly") {
  RunConfig c;
  const auto noise = NoiseModel{};
  const auto r = run_circuit(fixture::bell(), model_predictor(learn::zero_model()), c, noise);
  CHECK(r.tree.nodes.size() == 1);
  CHECK(r.fold.executions == 1);
  REQUIRE(r.direct);
  REQUIRE(r.reconstructed);
  CHECK(r.direct->e_mean == r.reconstructed->e_mean);
  CHECK(r.fold.distribution == execute(fixture::bell(), {}, execution_mode(c, noise)));
  CHECK(r.reduction_percent.has_value());
  CHECK(*r.reduction_percent == 0.0);
}

TEST_CASE("shor5 stand-in with the stub predictor splits once") {
  RunConfig c;
  c.backend = Backend::Exact;
  const auto r = run_circuit(fixture::shor5(), fixture::shor5_stub(), c, NoiseModel{});
  CHECK(r.tree.split_count() == 1);
  const auto leaves = r.tree.leaves();
  REQUIRE(leaves.size() == 2);
  CHECK(r.tree.nodes[static_cast<std::size_t>(leaves[0])].predicted_error == doctest::Approx(10.05));
  CHECK(r.tree.nodes[static_cast<std::size_t>(leaves[1])].predicted_error == doctest::Approx(25.99));
  CHECK(r.fold.executions == 7);
  REQUIRE(r.reconstructed);
  CHECK(r.reconstructed->e_mean < 1e-9);
  const auto report = nlohmann::json::parse(report_json(r, c, NoiseModel{}));
  CHECK(report["split_count"] == 1);
  CHECK(report["splits"][0]["label"] == fixture::kShorLabel);
  CHECK(report["leaves"].size() == 2);
}

TEST_CASE("end to end with a trained SVR under exact execution") {
  CorpusOptions co;
  co.count = 30;
  co.seed = 4;
  const auto rows = learn::build_dataset(random_corpus(co), NoiseModel{}, 128);
  learn::TrainOptions opt;
  opt.grid = false;
  opt.svr.c = 100.0;
  opt.svr.gamma = 0.1;
  const auto model = learn::train_model(learn::feature_matrix(rows), learn::label_vector(rows), opt).model;

  RandomCircuitOptions ro;
  ro.n_qubits = 6;
  ro.n_gates = 30;
  std::mt19937_64 rng(12);
  const auto circuit = random_circuit(ro, rng);
  RunConfig c;
  c.backend = Backend::Exact;
  c.threshold = 5.0;
  c.max_depth = 2;
  const auto r = run_circuit(circuit, model_predictor(model), c, NoiseModel{});
  REQUIRE(r.ideal);
  CHECK(total_variation(r.fold.distribution, *r.ideal) < 1e-9);
  CHECK(r.reconstructed->hellinger_fidelity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pipeline writes outputs reproducibly") {
  const fs::path dir = scratch("files");
  const fs::path circuit = dir / "shor5.qasm";
  write_file_atomic(circuit, emit_qasm(fixture::shor5()));
  const fs::path model = dir / "model.json";
  learn::save_model(per_qubit_model(), model);

  RunConfig c;
  c.circuit = circuit;
  c.model = model;
  c.seed = 21;
  c.out_dir = dir / "a";
  const auto r = run_pipeline(c);
  CHECK(r.tree.split_count() >= 1);
  c.out_dir = dir / "b";
  run_pipeline(c);
  for (const char* f : {"tree.json", "distribution.csv", "report.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(!slurp(dir / "a" / f).empty());
  }
  CHECK(fs::exists(dir / "a" / "timing.json"));
  CHECK_FALSE(fs::exists(dir / "a" / "report.json.tmp"));
  const auto tree = tree_from_json(slurp(dir / "a" / "tree.json"));
  CHECK(tree.nodes.size() == r.tree.nodes.size());
  std::istringstream csv(slurp(dir / "a" / "distribution.csv"));
  CHECK(read_distribution_csv(csv) == r.fold.distribution);

  c.seed = 22;
  c.out_dir = dir / "c";
  run_pipeline(c);
  CHECK(slurp(dir / "a" / "report.json") != slurp(dir / "c" / "report.json"));
  fs::remove_all(dir);
}

TEST_CASE("pipeline surfaces input errors with their types") {
  const fs::path dir = scratch("errors");
  RunConfig c;
  c.circuit = dir / "missing.qasm";
  CHECK_THROWS_AS(run_pipeline(c), ConfigError);
  write_file_atomic(dir / "bad.qasm", "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n");
  c.circuit = dir / "bad.qasm";
  CHECK_THROWS_AS(run_pipeline(c), ParseError);
  write_file_atomic(dir / "ok.qasm", emit_qasm(fixture::bell()));
  write_file_atomic(dir / "model.json", "{\"format\": \"qfrag-model\"}");
  c.circuit = dir / "ok.qasm";
  c.model = dir / "model.json";
  CHECK_THROWS_AS(run_pipeline(c), ModelError);
  fs::remove_all(dir);
}

TEST_CASE("bench on a noiseless backend reports n/a reductions") {
  CorpusOptions co;
  co.count = 4;
  co.seed = 2;
  RunConfig c;
  c.threshold = 30.0;
  c.max_depth = 1;
  c.backend = Backend::Exact;
  const auto report = bench_report(random_corpus(co), model_predictor(per_qubit_model()), c, NoiseModel::noiseless());
  REQUIRE(report.rows.size() == 4);
  for (const auto& row : report.rows) {
    CHECK(row.full_error == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(row.reduction_percent.has_value());
  }
  CHECK_FALSE(report.mean_reduction.has_value());
  CHECK(report.csv().find("n/a") != std::string::npos);
  CHECK(report.table().find("mean reduction: n/a") != std::string::npos);
}

TEST_CASE("bench rows agree with direct metric calls") {
  CorpusOptions co;
  co.count = 5;
  co.min_qubits = 4;
  co.max_qubits = 6;
  co.seed = 8;
  const auto corpus = random_corpus(co);
  RunConfig c;
  c.threshold = 40.0;
  c.max_depth = 1;
  c.shots = 2000;
  const NoiseModel noise{};
  const auto pred = model_predictor(per_qubit_model());
  const auto report = bench_report(corpus, pred, c, noise);
  REQUIRE(report.rows.size() == corpus.size());
  double sum = 0.0;
  int defined = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& row = report.rows[i];
    NoiseModel n = noise;
    n.seed = mix_seed(mix_seed(noise.seed, 0x62656e63), i);
    const auto r = run_circuit(corpus[i], pred, c, n);
    const auto ideal = simulate_ideal(corpus[i]);
    CHECK(row.reconstructed_error == doctest::Approx(mean_abs_error(ideal, r.fold.distribution)).epsilon(1e-12));
    const auto direct = r.tree.nodes.size() == 1 ? r.fold.distribution : execute(corpus[i], {}, execution_mode(c, n));
    CHECK(row.full_error == doctest::Approx(mean_abs_error(ideal, direct)).epsilon(1e-12));
    REQUIRE(row.reduction_percent.has_value());
    CHECK(*row.reduction_percent ==
          doctest::Approx((row.full_error - row.reconstructed_error) / row.full_error * 100.0).epsilon(1e-9));
    sum += *row.reduction_percent;
    ++defined;
  }
  REQUIRE(report.mean_reduction.has_value());
  CHECK(*report.mean_reduction == doctest::Approx(sum / defined).epsilon(1e-12));
}
