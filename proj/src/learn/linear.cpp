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

#include "qfrag/learn/linear.hpp"

#include <algorithm>
#include <cmath>

#include "qfrag/error.hpp"

namespace qfrag::learn {

namespace {

void check_training_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw ModelError("feature rows and labels differ in length");
  if (x.rows() < 2) throw ModelError("need at least two training rows");
  if (!x.allFinite() || !y.allFinite()) throw ModelError("training data contains non-finite values");
}

LinearModel prepare(const Eigen::MatrixXd& x, int degree, bool standardize) {
  LinearModel m;
  m.standardizer = standardize ? Standardizer::fit(x) : Standardizer::identity(x.cols());
  m.expansion = PolynomialExpansion(x.cols(), degree);
  return m;
}

}  // namespace

Eigen::MatrixXd LinearModel::design(const Eigen::MatrixXd& x) const {
  return expansion.transform(standardizer.transform(x));
}

double LinearModel::predict(const Eigen::VectorXd& x) const {
  return intercept + expansion.transform(standardizer.transform(x)).dot(weights);
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& x) const {
  return (design(x) * weights).array() + intercept;
}

LinearModel fit_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LinearOptions& options) {
  check_training_data(x, y);
  LinearModel m = prepare(x, options.degree, options.standardize);
  const Eigen::MatrixXd z = m.design(x);
  const Eigen::RowVectorXd zmean = z.colwise().mean();
  const double ymean = y.mean();
  const Eigen::MatrixXd zc = z.rowwise() - zmean;
  const Eigen::VectorXd yc = y.array() - ymean;

  Eigen::MatrixXd normal = zc.transpose() * zc;
  const Eigen::VectorXd rhs = zc.transpose() * yc;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  const double dmax = d.size() ? d.maxCoeff() : 0.0;
  const bool singular = ldlt.info() != Eigen::Success || d.size() == 0 || d.minCoeff() <= 1e-12 * std::max(dmax, 1.0);
  if (singular) {
    normal.diagonal().array() += 1e-10;
    ldlt.compute(normal);
    m.ridge_fallback = true;
    if (ldlt.info() != Eigen::Success) throw ModelError("normal equations are rank deficient and cannot be regularized");
  }
  m.weights = ldlt.solve(rhs);
  if (!m.weights.allFinite()) throw ModelError("least squares produced non-finite weights");
  m.intercept = ymean - zmean.dot(m.weights);
  return m;
}

LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double strength, const LassoOptions& options) {
  check_training_data(x, y);
  if (!(strength >= 0.0)) throw ModelError("lasso strength must be nonnegative");
  LinearModel m = prepare(x, options.degree, options.standardize);
  m.lasso = true;
  m.strength = strength;

  const Eigen::MatrixXd z = m.design(x);
  const Eigen::RowVectorXd zmean = z.colwise().mean();
  const double ymean = y.mean();
  const Eigen::MatrixXd zc = z.rowwise() - zmean;
  const Eigen::VectorXd yc = y.array() - ymean;
  const auto n = static_cast<double>(z.rows());
  const Eigen::Index p = z.cols();

  const Eigen::VectorXd col_sq = zc.colwise().squaredNorm().transpose() / n;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd resid = yc;
  const double y_scale = std::max(yc.squaredNorm() / n, 1e-300);

  m.converged = false;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_step = 0.0, max_beta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) <= 1e-15) continue;
      const double old = beta(j);
      const double rho = zc.col(j).dot(resid) / n + col_sq(j) * old;
      double updated = 0.0;
      if (rho > strength) updated = (rho - strength) / col_sq(j);
      else if (rho < -strength) updated = (rho + strength) / col_sq(j);
      if (updated != old) {
        resid -= zc.col(j) * (updated - old);
        beta(j) = updated;
      }
      max_step = std::max(max_step, std::abs(updated - old));
      max_beta = std::max(max_beta, std::abs(updated));
    }
    m.iterations = sweep;
    if (strength > 0.0) {
      // Dual point: scaled residual satisfying ||Z^T nu / n||_inf <= strength.
      const double primal = resid.squaredNorm() / (2 * n) + strength * beta.lpNorm<1>();
      const double corr = (zc.transpose() * resid).lpNorm<Eigen::Infinity>() / n;
      const double s = corr > strength ? strength / corr : 1.0;
      const Eigen::VectorXd nu = resid * s;
      const double dual = nu.dot(yc) / n - nu.squaredNorm() / (2 * n);
      m.duality_gap = primal - dual;
      if (m.duality_gap <= options.tol * y_scale) {
        m.converged = true;
        break;
      }
    } else if (max_step <= options.tol * std::max(max_beta, 1.0)) {
      m.converged = true;
      break;
    }
  }
  m.weights = beta;
  m.intercept = ymean - zmean.dot(beta);
  return m;
}

}  // namespace qfrag::learn
