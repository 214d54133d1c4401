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

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "qfrag/learn/svr.hpp"

namespace qfrag::learn {

struct GridAxes {
  std::vector<double> c_values;
  std::vector<double> gamma_values;
};

struct GridSpec {
  GridAxes coarse;
  GridAxes fine;
  int folds = 5;
  std::uint64_t seed = 0;

  /// C in {1, 1000, 2000, ..., 50000} x gamma in {1, 2, 3}, then
  /// C in {10, 20, ..., 1000} x gamma in {0.001, 0.01, 0.1, 1}.
  static GridSpec coarse_fine();
  void validate() const;
};

/// Held-out row indices of each fold, each sorted ascending. Rows are
/// shuffled with a seeded Fisher-Yates pass and dealt round-robin.
std::vector<std::vector<int>> kfold_indices(int n_rows, int folds, std::uint64_t seed);

/// Training rows of a fold: the complement of its held-out rows, ascending.
std::vector<int> fold_training_rows(int n_rows, const std::vector<int>& held_out);

struct GridCell {
  double c = 0.0;
  double gamma = 0.0;
  double cv_rmse = 0.0;
  bool coarse = true;
};

struct GridResult {
  double c = 0.0;
  double gamma = 0.0;
  double cv_rmse = 0.0;
  GridCell coarse_best;
  GridCell fine_best;
  std::vector<GridCell> cells;  // every evaluated cell, in evaluation order
};

/// Pooled cross-validated RMSE of an SVR with the given (C, gamma) over the
/// given folds. Each fold is trained exactly as fit_svr would train it.
double cv_rmse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::vector<int>>& folds,
               const SvrOptions& options);

/// Evaluates the coarse grid, then the fine grid, and reports the best cell
/// among all evaluated cells. Ties prefer smaller C, then smaller gamma.
GridResult grid_search(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GridSpec& spec,
                       const SvrOptions& base = {});

/// Strict ordering used to pick a grid winner.
bool better_cell(const GridCell& a, const GridCell& b);

}  // namespace qfrag::learn
