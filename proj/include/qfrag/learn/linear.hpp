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

#include "qfrag/learn/preprocess.hpp"

namespace qfrag::learn {

/// Linear model on polynomial-expanded (optionally standardized) inputs.
/// Shared by ordinary least squares and the lasso.
struct LinearModel {
  Standardizer standardizer;
  PolynomialExpansion expansion;
  Eigen::VectorXd weights;  // one per expanded column
  double intercept = 0.0;

  double strength = 0.0;  // L1 penalty; 0 for ordinary least squares
  bool lasso = false;
  bool ridge_fallback = false;  // normal equations were singular
  int iterations = 0;
  bool converged = true;
  double duality_gap = 0.0;

  double predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd design(const Eigen::MatrixXd& x) const;
};

struct LinearOptions {
  int degree = 1;
  bool standardize = true;
};

/// Ordinary least squares with intercept, solved through the normal
/// equations on centered columns. A ridge of 1e-10 is added only when the
/// normal matrix is numerically singular.
LinearModel fit_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LinearOptions& options = {});

struct LassoOptions {
  int degree = 1;
  bool standardize = true;
  int max_sweeps = 100000;
  double tol = 1e-12;
};

/// Minimizes (1/2n)||y - a - Xb||^2 + strength * ||b||_1 by cyclic
/// coordinate descent. Stops when the relative duality gap (strength > 0)
/// or the largest coefficient step (strength = 0) drops below tol. On
/// hitting max_sweeps the last iterate is returned with converged = false.
LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double strength,
                      const LassoOptions& options = {});

}  // namespace qfrag::learn
