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

#include "qfrag/learn/preprocess.hpp"

namespace qfrag::learn {

/// exp(-gamma * ||a - b||^2)
double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma);
Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma);

struct SvrOptions {
  double c = 1.0;
  double gamma = 1.0;
  double epsilon = 0.1;
  double tol = 1e-3;
  std::int64_t max_iter = 10000000;
  bool standardize = true;
};

/// Solution of the epsilon-insensitive dual
///   min 1/2 (a - a*)^T K (a - a*) + eps * sum(a + a*) - y^T (a - a*)
///   s.t. sum(a - a*) = 0, 0 <= a, a* <= C.
struct SvrDualSolution {
  Eigen::VectorXd beta;  // a - a*, one per training row
  double rho = 0.0;      // decision value is K beta - rho
  double objective = 0.0;
  double kkt_violation = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

/// Sequential minimal optimization with second-order working-set selection.
SvrDualSolution solve_svr_dual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double c, double epsilon,
                               double tol, std::int64_t max_iter);

struct SvrModel {
  Standardizer standardizer;
  Eigen::MatrixXd support;    // standardized support vectors, one per row
  Eigen::VectorXd dual_coef;  // a - a* for each support vector
  double bias = 0.0;
  double c = 1.0;
  double gamma = 1.0;
  double epsilon = 0.1;

  double objective = 0.0;
  double kkt_violation = 0.0;
  std::int64_t iterations = 0;
  bool converged = true;

  double predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  /// Prediction for a row that is already standardized.
  double decision(const Eigen::VectorXd& z) const;
};

SvrModel fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrOptions& options = {});

/// Builds the model from a solved dual over standardized training rows `z`.
SvrModel assemble_svr(const Standardizer& standardizer, const Eigen::MatrixXd& z, const SvrDualSolution& solution,
                      const SvrOptions& options);

}  // namespace qfrag::learn
