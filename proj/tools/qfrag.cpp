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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "qfrag/error.hpp"
#include "qfrag/learn/dataset.hpp"
#include "qfrag/learn/model.hpp"
#include "qfrag/learn/shots.hpp"
#include "qfrag/learn/train.hpp"
#include "qfrag/metrics.hpp"
#include "qfrag/pipeline.hpp"
#include "qfrag/qasm.hpp"
#include "qfrag/random_circuit.hpp"

namespace fs = std::filesystem;
using namespace qfrag;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string noise;
  std::uint64_t shots = 128;
  std::string out_dir;
};

struct CorpusSource {
  std::string dir;
  int random = 0;
  CorpusOptions opts;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--corpus", dir, "Directory of .qasm circuits");
    cmd->add_option("--random", random, "Generate this many random circuits instead");
    cmd->add_option("--min-qubits", opts.min_qubits, "Random corpus: fewest qubits")->capture_default_str();
    cmd->add_option("--max-qubits", opts.max_qubits, "Random corpus: most qubits")->capture_default_str();
    cmd->add_option("--min-gates", opts.min_gates, "Random corpus: fewest gates")->capture_default_str();
    cmd->add_option("--max-gates", opts.max_gates, "Random corpus: most gates")->capture_default_str();
  }

  std::vector<QuantumCircuit> load(std::uint64_t seed) const {
    if (!dir.empty() && random > 0) throw ConfigError("give either --corpus or --random, not both");
    if (!dir.empty()) {
      auto corpus = learn::load_corpus(dir);
      if (corpus.empty()) throw ConfigError("no .qasm files in " + dir);
      return corpus;
    }
    if (random <= 0) throw ConfigError("a corpus is required (--corpus DIR or --random N)");
    CorpusOptions o = opts;
    o.count = random;
    o.seed = seed;
    return random_corpus(o);
  }
};

NoiseModel global_noise(const Globals& g) {
  RunConfig c;
  c.noise = g.noise;
  c.seed = g.seed;
  return resolve_noise(c);
}

fs::path output_path(const Globals& g, const std::string& explicit_path, const char* default_name) {
  if (!explicit_path.empty()) return explicit_path;
  if (g.out_dir.empty()) return {};
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + g.out_dir + "'");
  return fs::path(g.out_dir) / default_name;
}

void emit(const fs::path& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfrag: error-predicted circuit fragmentation and reconstruction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for noise, corpus generation and model fitting")->capture_default_str();
  app.add_option("--noise", g.noise, "Noise config file (JSON or key = value lines)");
  app.add_option("--shots", g.shots, "Shots per execution")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for output files");

  std::string circuit_path, model_path, backend = "noisy-shots", plan_out, output;
  double threshold = 50.0;
  int max_cut = 2, max_depth = 8;

  auto* simulate = app.add_subcommand("simulate", "Simulate a circuit and print its outcome distribution");
  simulate->add_option("--circuit", circuit_path, "OpenQASM 2.0 file")->required();
  simulate->add_option("--backend", backend, "exact or noisy-shots")->capture_default_str();

  CorpusSource dataset_src;
  auto* dataset = app.add_subcommand("dataset", "Label a corpus with measured noisy error");
  dataset_src.add_to(dataset);
  dataset->add_option("--output", output, "Dataset CSV (default OUT_DIR/dataset.csv, else stdout)");

  std::string dataset_path, family = "svr";
  int degree = 1, trees = 100;
  double lasso_strength = 0.1, svr_c = 0.0, svr_gamma = 0.0, test_fraction = 0.2;
  auto* train = app.add_subcommand("train", "Fit an error model to a dataset");
  train->add_option("--dataset", dataset_path, "Dataset CSV")->required();
  train->add_option("--family", family, "svr, linear, lasso or forest")->capture_default_str();
  train->add_option("--degree", degree, "Polynomial degree for linear and lasso")->capture_default_str();
  train->add_option("--lasso-strength", lasso_strength, "L1 strength for lasso")->capture_default_str();
  train->add_option("--trees", trees, "Trees in the forest")->capture_default_str();
  train->add_option("--c", svr_c, "SVR penalty; with --gamma skips the grid search");
  train->add_option("--gamma", svr_gamma, "SVR RBF width; with --c skips the grid search");
  train->add_option("--test-fraction", test_fraction, "Held-out fraction for the scorecard")->capture_default_str();
  train->add_option("--output", output, "Model file (default OUT_DIR/model.json)");

  auto* predict = app.add_subcommand("predict", "Predict the error of a circuit");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--circuit", circuit_path, "OpenQASM 2.0 file")->required();

  auto add_fragment_opts = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_path, "Model file (default: constant zero)");
    cmd->add_option("--threshold", threshold, "Error threshold percent")->capture_default_str();
    cmd->add_option("--max-cut", max_cut, "Cut-size budget K")->capture_default_str();
    cmd->add_option("--max-depth", max_depth, "Deepest fragmentation level")->capture_default_str();
  };
  auto* cut = app.add_subcommand("cut", "Build the fragmentation tree of a circuit");
  cut->add_option("--circuit", circuit_path, "OpenQASM 2.0 file")->required();
  add_fragment_opts(cut);
  cut->add_option("--plan-out", plan_out, "Tree JSON file (default OUT_DIR/tree.json, else stdout)");

  auto* run = app.add_subcommand("run", "Fragment, execute and reconstruct a circuit");
  run->add_option("--circuit", circuit_path, "OpenQASM 2.0 file")->required();
  add_fragment_opts(run);
  run->add_option("--backend", backend, "exact or noisy-shots (QFRAG_BACKEND overrides)")->capture_default_str();
  run->add_option("--plan-out", plan_out, "Also write the tree JSON here");

  CorpusSource bench_src;
  auto* bench = app.add_subcommand("bench", "Compare reconstructed and direct error over a corpus");
  bench_src.add_to(bench);
  add_fragment_opts(bench);
  bench->add_option("--backend", backend, "exact or noisy-shots (QFRAG_BACKEND overrides)")->capture_default_str();

  CorpusSource sweep_src;
  int min_exp = 1, max_exp = 13, sweep_degree = 3;
  auto* sweep = app.add_subcommand("shots-sweep", "Find the shot count where fitted error is lowest");
  sweep_src.add_to(sweep);
  sweep->add_option("--min-exp", min_exp, "Smallest shot exponent")->capture_default_str();
  sweep->add_option("--max-exp", max_exp, "Largest shot exponent")->capture_default_str();
  sweep->add_option("--degree", sweep_degree, "Polynomial degree of the fit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    auto make_config = [&]() {
      RunConfig c;
      c.circuit = circuit_path;
      c.model = model_path;
      c.noise = g.noise;
      c.out_dir = g.out_dir;
      c.threshold = threshold;
      c.max_cuts = max_cut;
      c.max_depth = max_depth;
      c.shots = g.shots;
      c.seed = g.seed;
      c.backend = resolve_backend(backend_from_name(backend));
      c.validate();
      return c;
    };

    if (*simulate) {
      RunConfig c = make_config();
      const NoiseModel noise = resolve_noise(c);
      const QuantumCircuit circuit = parse_qasm_file(circuit_path);
      const auto dist = execute(circuit, {}, execution_mode(c, noise));
      std::ostringstream csv;
      write_distribution_csv(csv, dist);
      emit(output_path(g, "", "distribution.csv"), csv.str());
    } else if (*dataset) {
      const auto corpus = dataset_src.load(g.seed);
      if (g.shots < 1) throw ConfigError("shots must be at least 1");
      const auto rows = learn::build_dataset(corpus, global_noise(g), g.shots);
      emit(output_path(g, output, "dataset.csv"), learn::dataset_to_csv(rows));
    } else if (*train) {
      const auto rows = learn::read_dataset(dataset_path);
      if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw ConfigError("test fraction must lie in [0, 1)");
      std::vector<learn::DatasetRow> fit_rows = rows, test_rows;
      if (test_fraction > 0.0) std::tie(fit_rows, test_rows) = learn::train_test_split(rows, 1.0 - test_fraction, g.seed);
      learn::TrainOptions opt;
      opt.family = learn::family_from_name(family);
      opt.degree = degree;
      opt.lasso_strength = lasso_strength;
      opt.forest.n_trees = trees;
      opt.forest.seed = g.seed;
      opt.grid_spec.seed = g.seed;
      if (svr_c > 0.0 || svr_gamma > 0.0) {
        if (!(svr_c > 0.0 && svr_gamma > 0.0)) throw ConfigError("--c and --gamma must be given together");
        opt.grid = false;
        opt.svr.c = svr_c;
        opt.svr.gamma = svr_gamma;
      }
      const auto outcome = learn::train_model(learn::feature_matrix(fit_rows), learn::label_vector(fit_rows), opt);
      const fs::path out = output_path(g, output, "model.json");
      if (out.empty()) throw ConfigError("train needs --output or --out-dir");
      learn::save_model(outcome.model, out);
      std::cout << "family " << learn::family_name(outcome.model.family()) << ", " << fit_rows.size()
                << " training rows\n";
      if (outcome.grid) {
        std::cout << "grid search: C=" << outcome.grid->c << " gamma=" << outcome.grid->gamma
                  << " cv_rmse=" << outcome.grid->cv_rmse << "\n";
      }
      if (!test_rows.empty()) {
        std::vector<double> actual, predicted;
        for (const auto& r : test_rows) {
          actual.push_back(r.label);
          predicted.push_back(learn::predict_error(outcome.model, r.features));
        }
        const bool adjusted = test_rows.size() > kNumFeatures + 1;
        const auto s = model_scorecard(actual, predicted, adjusted ? static_cast<int>(kNumFeatures) : 0);
        std::cout << "test rows " << test_rows.size() << ": rmse " << s.rmse << ", mean error " << s.mean_error
                  << ", R2 " << s.r2 << ", centered R2 " << s.centered_r2;
        if (adjusted) std::cout << ", adjusted R2 " << s.adjusted_r2;
        std::cout << "\n";
      }
      std::cout << "model written to " << out.string() << "\n";
    } else if (*predict) {
      const auto model = learn::load_model(model_path);
      const auto circuit = parse_qasm_file(circuit_path);
      std::cout << format("%.6f", learn::predict_error(model, circuit)) << "\n";
    } else if (*cut) {
      RunConfig c = make_config();
      const auto circuit = parse_qasm_file(circuit_path);
      const auto model = model_path.empty() ? learn::zero_model() : learn::load_model(model_path);
      const auto tree = fragment_recursively(circuit, model_predictor(model), c.fragment_options());
      for (const auto& n : tree.nodes) {
        std::cout << std::string(static_cast<std::size_t>(2 * n.depth), ' ') << "node " << n.id << ": "
                  << n.circuit.n_qubits() << " qubits, predicted " << format("%.3f", n.predicted_error) << "%";
        if (n.cut) std::cout << ", cut " << n.cut->candidate.label() << " distance " << format("%.3f", n.cut->distance);
        if (n.unsplittable) std::cout << ", unsplittable (" << n.reason << ")";
        std::cout << "\n";
      }
      const fs::path out = output_path(g, plan_out, "tree.json");
      if (!out.empty()) write_file_atomic(out, tree_to_json(tree));
    } else if (*run) {
      RunConfig c = make_config();
      const RunResult r = run_pipeline(c);
      if (!plan_out.empty()) write_file_atomic(plan_out, tree_to_json(r.tree));
      if (g.out_dir.empty()) {
        std::cout << report_json(r, c, resolve_noise(c));
      } else {
        std::cout << "splits " << r.tree.split_count() << ", leaves " << r.tree.leaves().size() << ", executions "
                  << r.fold.executions << "\n";
        if (r.reconstructed) {
          std::cout << "reconstructed E_mean " << format("%.4f", r.reconstructed->e_mean) << "%, fidelity "
                    << format("%.4f", r.reconstructed->hellinger_fidelity) << "\n";
        }
        std::cout << "outputs written to " << g.out_dir << "\n";
      }
      for (int id : r.fold.unsplittable_leaves) {
        std::cerr << "warning: leaf " << id << " is above threshold ("
                  << r.tree.nodes[static_cast<std::size_t>(id)].reason << ")\n";
      }
    } else if (*bench) {
      RunConfig c = make_config();
      const auto corpus = bench_src.load(g.seed);
      const auto model = model_path.empty() ? learn::zero_model() : learn::load_model(model_path);
      const auto report = bench_report(corpus, model_predictor(model), c, resolve_noise(c));
      std::cout << report.table();
      const fs::path out = output_path(g, "", "bench.csv");
      if (!out.empty()) write_file_atomic(out, report.csv());
    } else if (*sweep) {
      if (min_exp < 0 || max_exp < min_exp || max_exp > 24) throw ConfigError("bad shot exponent range");
      const auto corpus = sweep_src.load(g.seed);
      std::vector<int> exps;
      for (int x = min_exp; x <= max_exp; ++x) exps.push_back(x);
      const auto res = learn::shots_sweep(corpus, global_noise(g), exps, sweep_degree);
      std::string csv = "exponent,shots,mean_error\n";
      for (std::size_t i = 0; i < res.exponents.size(); ++i) {
        csv += std::to_string(res.exponents[i]) + "," + std::to_string(1ULL << res.exponents[i]) + "," +
               format("%.17g", res.mean_errors[i]) + "\n";
      }
      std::cout << csv << "best exponent " << res.best_exponent << " (" << (1ULL << res.best_exponent) << " shots)\n";
      const fs::path out = output_path(g, "", "shots.csv");
      if (!out.empty()) write_file_atomic(out, csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << tagged_message(e) << "\n";
    return static_cast<int>(exit_code_for(e));
  }
  return 0;
}
