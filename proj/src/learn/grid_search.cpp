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

#include "qfrag/learn/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "qfrag/error.hpp"

namespace qfrag::learn {

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& y, const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
  return out;
}

// Standardized fold data and Gram matrix for one gamma, reused across C.
struct FoldKernel {
  Standardizer standardizer;
  Eigen::MatrixXd z_train;
  Eigen::VectorXd y_train;
  Eigen::MatrixXd z_test;
  Eigen::VectorXd y_test;
  Eigen::MatrixXd gram;
};

std::vector<FoldKernel> fold_kernels(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                     const std::vector<std::vector<int>>& folds, const SvrOptions& options) {
  const int n = static_cast<int>(x.rows());
  std::vector<FoldKernel> out;
  for (const auto& held : folds) {
    const auto train = fold_training_rows(n, held);
    if (train.size() < 2) throw ModelError("fold leaves fewer than two training rows");
    FoldKernel fk;
    const Eigen::MatrixXd xt = select_rows(x, train);
    fk.standardizer = options.standardize ? Standardizer::fit(xt) : Standardizer::identity(x.cols());
    fk.z_train = fk.standardizer.transform(xt);
    fk.y_train = select_rows(y, train);
    fk.z_test = fk.standardizer.transform(select_rows(x, held));
    fk.y_test = select_rows(y, held);
    fk.gram = rbf_gram(fk.z_train, fk.z_train, options.gamma);
    out.push_back(std::move(fk));
  }
  return out;
}

double pooled_rmse(const std::vector<FoldKernel>& kernels, const SvrOptions& options) {
  double sq = 0.0;
  std::size_t count = 0;
  for (const auto& fk : kernels) {
    const auto sol = solve_svr_dual(fk.gram, fk.y_train, options.c, options.epsilon, options.tol, options.max_iter);
    const SvrModel m = assemble_svr(fk.standardizer, fk.z_train, sol, options);
    for (Eigen::Index i = 0; i < fk.z_test.rows(); ++i) {
      const double d = m.decision(fk.z_test.row(i).transpose()) - fk.y_test(i);
      sq += d * d;
      ++count;
    }
  }
  return std::sqrt(sq / static_cast<double>(count));
}

void check_axes(const GridAxes& a, const char* stage) {
  if (a.c_values.empty() || a.gamma_values.empty()) throw ModelError(std::string(stage) + " grid is empty");
  for (double v : a.c_values) {
    if (!(v > 0.0)) throw ModelError(std::string(stage) + " grid has a non-positive C");
  }
  for (double v : a.gamma_values) {
    if (!(v > 0.0)) throw ModelError(std::string(stage) + " grid has a non-positive gamma");
  }
}

}  // namespace

GridSpec GridSpec::coarse_fine() {
  GridSpec g;
  g.coarse.c_values.push_back(1.0);
  for (int c = 1000; c <= 50000; c += 1000) g.coarse.c_values.push_back(c);
  g.coarse.gamma_values = {1.0, 2.0, 3.0};
  for (int c = 10; c <= 1000; c += 10) g.fine.c_values.push_back(c);
  g.fine.gamma_values = {0.001, 0.01, 0.1, 1.0};
  return g;
}

void GridSpec::validate() const {
  check_axes(coarse, "coarse");
  check_axes(fine, "fine");
  if (folds < 2) throw ModelError("grid search needs at least two folds");
}

std::vector<std::vector<int>> kfold_indices(int n_rows, int folds, std::uint64_t seed) {
  if (folds < 2) throw ModelError("need at least two folds");
  if (folds > n_rows) throw ModelError("more folds than rows");
  std::vector<int> order(static_cast<std::size_t>(n_rows));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n_rows - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  for (int i = 0; i < n_rows; ++i) out[static_cast<std::size_t>(i % folds)].push_back(order[static_cast<std::size_t>(i)]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::vector<int> fold_training_rows(int n_rows, const std::vector<int>& held_out) {
  std::vector<char> held(static_cast<std::size_t>(n_rows), 0);
  for (int r : held_out) held[static_cast<std::size_t>(r)] = 1;
  std::vector<int> train;
  for (int r = 0; r < n_rows; ++r) {
    if (!held[static_cast<std::size_t>(r)]) train.push_back(r);
  }
  return train;
}

double cv_rmse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::vector<int>>& folds,
               const SvrOptions& options) {
  if (x.rows() != y.size()) throw ModelError("feature rows and labels differ in length");
  return pooled_rmse(fold_kernels(x, y, folds, options), options);
}

bool better_cell(const GridCell& a, const GridCell& b) {
  if (a.cv_rmse != b.cv_rmse) return a.cv_rmse < b.cv_rmse;
  if (a.c != b.c) return a.c < b.c;
  return a.gamma < b.gamma;
}

GridResult grid_search(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GridSpec& spec,
                       const SvrOptions& base) {
  spec.validate();
  if (x.rows() != y.size()) throw ModelError("feature rows and labels differ in length");
  const auto folds = kfold_indices(static_cast<int>(x.rows()), spec.folds, spec.seed);

  GridResult result;
  std::map<std::pair<double, double>, double> seen;
  auto run_stage = [&](const GridAxes& axes, bool coarse) {
    GridCell best;
    bool have = false;
    for (double gamma : axes.gamma_values) {
      SvrOptions opt = base;
      opt.gamma = gamma;
      std::vector<FoldKernel> kernels;
      for (double c : axes.c_values) {
        GridCell cell{c, gamma, 0.0, coarse};
        if (auto it = seen.find({c, gamma}); it != seen.end()) {
          cell.cv_rmse = it->second;
        } else {
          if (kernels.empty()) kernels = fold_kernels(x, y, folds, opt);
          opt.c = c;
          cell.cv_rmse = pooled_rmse(kernels, opt);
          seen[{c, gamma}] = cell.cv_rmse;
          result.cells.push_back(cell);
        }
        if (!have || better_cell(cell, best)) {
          best = cell;
          have = true;
        }
      }
    }
    return best;
  };
  result.coarse_best = run_stage(spec.coarse, true);
  result.fine_best = run_stage(spec.fine, false);
  const GridCell& win = better_cell(result.fine_best, result.coarse_best) ? result.fine_best : result.coarse_best;
  result.c = win.c;
  result.gamma = win.gamma;
  result.cv_rmse = win.cv_rmse;
  return result;
}

}  // namespace qfrag::learn
