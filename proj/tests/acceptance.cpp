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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qfrag/learn/dataset.hpp"
#include "qfrag/learn/grid_search.hpp"
#include "qfrag/learn/linear.hpp"
#include "qfrag/learn/model.hpp"
#include "qfrag/learn/shots.hpp"
#include "qfrag/learn/svr.hpp"
#include "qfrag/learn/train.hpp"
#include "qfrag/metrics.hpp"
#include "qfrag/pipeline.hpp"
#include "qfrag/qasm.hpp"
#include "qfrag/random_circuit.hpp"
#include "qfrag/reconstruct.hpp"

using namespace qfrag;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

oracle::Matrix to_rows(const Eigen::MatrixXd& x) {
  oracle::Matrix m(static_cast<std::size_t>(x.rows()), oracle::Vector(static_cast<std::size_t>(x.cols())));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x(i, j);
  return m;
}

oracle::Vector to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = n(rng);
  return x;
}

FragmentationTree depth_one(const fixture::CutCase& c) {
  auto tree = single_node_tree(c.circuit);
  split_node(tree, 0, c.cut);
  return tree;
}

Verdict reconstruction_exactness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int single = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto c = fixture::random_cut_case(rng, 1 + trial % 2);
    const auto folded = fold_tree(depth_one(c), ExecutionMode::exact());
    worst = std::max(worst, total_variation(folded.distribution, simulate_ideal(c.circuit)));
    ++single;
  }
  int nested = 0;
  for (int trial = 0; nested < 30 && trial < 400; ++trial) {
    const auto c = fixture::random_cut_case(rng, 1 + trial % 2);
    auto tree = depth_one(c);
    bool split = false;
    for (int child : {1, 2}) {
      const auto inner = enumerate_cuts(tree.nodes[static_cast<std::size_t>(child)].circuit, 2);
      if (inner.empty()) continue;
      split_node(tree, child, inner[rng() % inner.size()]);
      split = true;
    }
    if (!split) continue;
    ++nested;
    worst = std::max(worst, total_variation(fold_tree(tree, ExecutionMode::exact()).distribution,
                                            simulate_ideal(c.circuit)));
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << single << " single-split and " << nested << " two-level cases, max TV " << fmt("%.3g", worst) << ", "
    << fmt("%.1f", secs) << " s";
  return {single >= 100 && nested >= 1 && worst < 1e-9 && secs < 120.0, d.str()};
}

Verdict worked_r_squared() {
  const std::vector<double> actual{64.343}, predicted{59.210};
  const double r2 = r_squared(actual, predicted);
  return {std::abs(r2 - 0.993) <= 0.001, "R2 = " + fmt("%.6f", r2)};
}

Verdict cut_table_selection() {
  std::vector<ScoredCut> rows;
  for (const auto& [a, b] : fixture::cut_table_pairs()) rows.emplace_back(CutCandidate{}, a, b);
  const auto i = select_cut(rows);
  const auto& label = fixture::cut_table_labels()[i];
  std::ostringstream d;
  d << "row " << i << " " << label << ", distance " << fmt("%.4f", rows[i].distance);
  return {label == fixture::kShorLabel && std::abs(rows[i].distance - 15.94) <= 0.001, d.str()};
}

Verdict shor5_structure() {
  FragmentOptions opt;
  opt.threshold = 50.0;
  const auto tree = fragment_recursively(fixture::shor5(), fixture::shor5_stub(), opt);
  const auto leaves = tree.leaves();
  std::ostringstream d;
  d << tree.split_count() << " split, " << leaves.size() << " leaves";
  bool ok = tree.split_count() == 1 && leaves.size() == 2;
  if (ok) {
    const auto& root = tree.nodes[0];
    ok = root.cut && root.cut->candidate.label() == fixture::kShorLabel;
    const double e1 = tree.nodes[static_cast<std::size_t>(leaves[0])].predicted_error;
    const double e2 = tree.nodes[static_cast<std::size_t>(leaves[1])].predicted_error;
    d << " (" << e1 << " / " << e2 << ")";
    ok = ok && std::abs(root.predicted_error - 59.210) < 1e-12;
  }
  return {ok, d.str()};
}

Verdict ml_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(505);
  double ols_dev = 0.0, lasso_dev = 0.0, svr_dev = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 1 + trial % 5;
    const Eigen::MatrixXd x = random_matrix(40, p, rng);
    const Eigen::VectorXd y = random_matrix(40, 1, rng).col(0) + x * Eigen::VectorXd::LinSpaced(p, -2.0, 3.0);
    const auto m = learn::fit_linear(x, y, {1, false});
    const auto ref = oracle::ols(to_rows(x), to_vec(y));
    ols_dev = std::max(ols_dev, std::abs(m.intercept - ref[0]));
    for (int j = 0; j < p; ++j) ols_dev = std::max(ols_dev, std::abs(m.weights(j) - ref[static_cast<std::size_t>(j) + 1]));
    const auto ls = learn::fit_lasso(x, y, 0.0, {1, false});
    lasso_dev = std::max({lasso_dev, std::abs(ls.intercept - m.intercept),
                          (ls.weights - m.weights).cwiseAbs().maxCoeff()});
  }
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 20 + 6 * trial;
    const Eigen::MatrixXd x = random_matrix(n, 3, rng);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = 10.0 * std::tanh(x(i, 0)) + x(i, 1) * x(i, 2);
    const double c = trial % 2 ? 5.0 : 100.0;
    const auto m = learn::fit_svr(x, y, {.c = c, .gamma = 0.5, .epsilon = 0.1, .tol = 1e-6});
    const Eigen::MatrixXd z = m.standardizer.transform(x);
    const double ref = oracle::svr_dual_objective(to_rows(learn::rbf_gram(z, z, 0.5)), to_vec(y), c, 0.1, 30000);
    svr_dev = std::max(svr_dev, std::abs(m.objective - ref));
  }

  // Exhaustive grid: every cell trained from scratch on the same folds.
  const int n = 36;
  const Eigen::MatrixXd x = random_matrix(n, 3, rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = 20.0 + 5.0 * std::sin(x(i, 0)) + 3.0 * x(i, 1) * x(i, 1);
  learn::GridSpec g;
  g.coarse = {{1.0, 100.0, 1000.0}, {1.0, 2.0, 3.0}};
  g.fine = {{10.0, 50.0, 200.0}, {0.01, 0.1, 1.0}};
  g.folds = 4;
  g.seed = 9;
  const auto r = learn::grid_search(x, y, g);
  const auto folds = learn::kfold_indices(n, g.folds, g.seed);
  double best_rmse = 1e300, best_c = 0.0, best_gamma = 0.0;
  for (const auto* axes : {&g.coarse, &g.fine}) {
    for (double c : axes->c_values) {
      for (double gamma : axes->gamma_values) {
        double sq = 0.0;
        int cnt = 0;
        for (const auto& held : folds) {
          std::vector<int> train;
          for (int i = 0; i < n; ++i)
            if (std::find(held.begin(), held.end(), i) == held.end()) train.push_back(i);
          Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), 3);
          Eigen::VectorXd yt(static_cast<Eigen::Index>(train.size()));
          for (std::size_t k = 0; k < train.size(); ++k) {
            xt.row(static_cast<Eigen::Index>(k)) = x.row(train[k]);
            yt(static_cast<Eigen::Index>(k)) = y(train[k]);
          }
          const auto m = learn::fit_svr(xt, yt, {.c = c, .gamma = gamma});
          for (int i : held) {
            const double d = m.predict(Eigen::VectorXd(x.row(i).transpose())) - y(i);
            sq += d * d;
            ++cnt;
          }
        }
        const double rmse = std::sqrt(sq / cnt);
        if (rmse < best_rmse || (rmse == best_rmse && (c < best_c || (c == best_c && gamma < best_gamma)))) {
          best_rmse = rmse;
          best_c = c;
          best_gamma = gamma;
        }
      }
    }
  }
  const bool grid_ok = r.c == best_c && r.gamma == best_gamma;
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "OLS dev " << fmt("%.2g", ols_dev) << ", lasso(0) dev " << fmt("%.2g", lasso_dev) << ", SVR dual dev "
    << fmt("%.2g", svr_dev) << ", grid (" << r.c << "," << r.gamma << ") vs exhaustive (" << best_c << ","
    << best_gamma << "), " << fmt("%.1f", secs) << " s";
  return {ols_dev < 1e-8 && lasso_dev < 1e-6 && svr_dev < 1e-3 && grid_ok && secs < 60.0, d.str()};
}

struct TrainedSet {
  learn::TrainedModel svr;
  double svr_r2 = 0.0, linear_r2 = 0.0, forest_r2 = 0.0;
  double svr_cr2 = 0.0, linear_cr2 = 0.0, forest_cr2 = 0.0;
  std::size_t train_rows = 0, test_rows = 0;
  double c = 0.0, gamma = 0.0;
};

const TrainedSet& trained_set() {
  static const TrainedSet set = [] {
    CorpusOptions co;
    co.count = 200;
    co.seed = 6;
    const auto rows = learn::build_dataset(random_corpus(co), NoiseModel{}, 128);
    const auto [train, test] = learn::train_test_split(rows, 0.8, 6);
    const auto x = learn::feature_matrix(train);
    const auto y = learn::label_vector(train);
    std::vector<double> actual;
    for (const auto& r : test) actual.push_back(r.label);
    auto score = [&](const learn::TrainedModel& m, double& r2, double& cr2) {
      std::vector<double> pred;
      for (const auto& r : test) pred.push_back(learn::predict_error(m, r.features));
      r2 = r_squared(actual, pred);
      cr2 = centered_r_squared(actual, pred);
    };
    TrainedSet s;
    s.train_rows = train.size();
    s.test_rows = test.size();
    learn::TrainOptions svr;
    const auto outcome = learn::train_model(x, y, svr);
    s.svr = outcome.model;
    if (outcome.grid) {
      s.c = outcome.grid->c;
      s.gamma = outcome.grid->gamma;
    }
    score(s.svr, s.svr_r2, s.svr_cr2);
    learn::TrainOptions lin;
    lin.family = learn::ModelFamily::Linear;
    score(learn::train_model(x, y, lin).model, s.linear_r2, s.linear_cr2);
    learn::TrainOptions forest;
    forest.family = learn::ModelFamily::Forest;
    forest.forest.seed = 6;
    score(learn::train_model(x, y, forest).model, s.forest_r2, s.forest_cr2);
    return s;
  }();
  return set;
}

Verdict svr_quality() {
  const auto& s = trained_set();
  std::ostringstream d;
  d << s.train_rows << "/" << s.test_rows << " rows, SVR(C=" << s.c << ",g=" << s.gamma << ") R2 "
    << fmt("%.3f", s.svr_r2) << ", linear " << fmt("%.3f", s.linear_r2) << ", forest " << fmt("%.3f", s.forest_r2)
    << "; centered R2 SVR " << fmt("%.3f", s.svr_cr2) << ", linear " << fmt("%.3f", s.linear_cr2) << ", forest "
    << fmt("%.3f", s.forest_cr2);
  return {s.svr_r2 >= 0.7 && s.svr_r2 > s.linear_r2, d.str()};
}

Verdict noise_reduction() {
  const auto t0 = Clock::now();
  CorpusOptions co;
  co.count = 200;
  co.min_qubits = 4;
  co.max_qubits = 6;
  co.seed = 77;
  std::vector<QuantumCircuit> corpus;
  for (auto& c : random_corpus(co)) {
    if (corpus.size() == 20) break;
    if (!enumerate_cuts(c, 2).empty()) corpus.push_back(std::move(c));
  }
  RunConfig config;
  config.threshold = 1e-6;
  config.max_depth = 1;
  config.shots = 10000;
  config.seed = 77;
  NoiseModel noise{};
  noise.seed = config.seed;
  const auto report = bench_report(corpus, model_predictor(trained_set().svr), config, noise);
  const double secs = seconds_since(t0);
  const double share = static_cast<double>(report.improved) / static_cast<double>(report.rows.size());
  std::ostringstream d;
  d << report.improved << "/" << report.rows.size() << " circuits improved, mean reduction "
    << (report.mean_reduction ? fmt("%.2f", *report.mean_reduction) + "%" : std::string("n/a")) << ", "
    << fmt("%.1f", secs) << " s";
  return {report.rows.size() >= 20 && share >= 0.7 && report.mean_reduction && *report.mean_reduction > 0.0 &&
              secs < 600.0,
          d.str()};
}

Verdict metric_identities() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    OutcomeDistribution p(n), q(n);
    for (Bits k = 0; k < (Bits{1} << n); ++k) {
      p.set(k, u(rng));
      q.set(k, u(rng));
    }
    p.normalize();
    q.normalize();
    ok = ok && std::abs(hellinger_fidelity(p, p) - 1.0) < 1e-12;
    ok = ok && hellinger_fidelity(p, q) == hellinger_fidelity(q, p);
    ok = ok && mean_abs_error(p, p) == 0.0 && rms_error(p, p) == 0.0;
    ok = ok && mean_abs_error(p, q) > 0.0 && rms_error(p, q) > 0.0;
  }
  OutcomeDistribution a(2), b(2);
  a.set(0, 0.5);
  a.set(1, 0.5);
  b.set(2, 0.25);
  b.set(3, 0.75);
  ok = ok && hellinger_fidelity(a, b) == 0.0 && hellinger_fidelity(b, a) == 0.0;
  return {ok, "identity, disjointness, symmetry and zero-error checks over 50 random pairs"};
}

Verdict shot_sweep() {
  std::vector<int> xs;
  std::vector<double> clean, bumpy;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (int x = 1; x <= 13; ++x) {
    const double t = x - 7.0;
    xs.push_back(x);
    clean.push_back(5.0 + t * t + 0.1 * t * t * t);
    bumpy.push_back(clean.back() + jitter(rng));
  }
  const int a = learn::best_shot_exponent(xs, clean).best_exponent;
  const int b = learn::best_shot_exponent(xs, bumpy).best_exponent;
  return {a == 7 && b == 7, "best exponent " + std::to_string(a) + " (clean), " + std::to_string(b) + " (jittered)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "qfrag_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_file_atomic(dir / "shor5.qasm", emit_qasm(fixture::shor5()));
  auto model = learn::zero_model();
  std::get<learn::LinearModel>(model.params).weights(0) = 12.0;
  learn::save_model(model, dir / "model.json");
  auto invoke = [&](const char* sub) {
    const std::string cmd = std::string("\"") + QFRAG_CLI + "\" --seed 42 --out-dir \"" + (dir / sub).string() +
                            "\" run --circuit \"" + (dir / "shor5.qasm").string() + "\" --model \"" +
                            (dir / "model.json").string() + "\" --threshold 30 --max-depth 2 > /dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  const int ra = invoke("a"), rb = invoke("b");
  bool same = ra == 0 && rb == 0;
  int files = 0;
  for (const char* f : {"tree.json", "distribution.csv", "report.json"}) {
    const auto x = slurp(dir / "a" / f), y = slurp(dir / "b" / f);
    same = same && !x.empty() && x == y;
    ++files;
  }
  fs::remove_all(dir);
  return {same, "exit codes " + std::to_string(ra) + "/" + std::to_string(rb) + ", " + std::to_string(files) +
                    " payload files compared byte for byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"reconstruction exactness", reconstruction_exactness},
      {"worked R^2 example", worked_r_squared},
      {"cut selector on the cut table", cut_table_selection},
      {"Shor-5 tree structure", shor5_structure},
      {"ML oracle equivalence", ml_oracles},
      {"SVR predictive quality", svr_quality},
      {"noise-reduction direction", noise_reduction},
      {"metric identities", metric_identities},
      {"shot sweep", shot_sweep},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS " : "FAIL ") << (i + 1) << " " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
