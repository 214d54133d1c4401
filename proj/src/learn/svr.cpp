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

#include "qfrag/learn/svr.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qfrag/error.hpp"

namespace qfrag::learn {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma) {
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double d = a(k) - b(k);
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  if (a.cols() != b.cols()) throw ModelError("kernel inputs differ in dimension");
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::VectorXd ai = a.row(i).transpose();
    for (Eigen::Index j = 0; j < b.rows(); ++j) k(i, j) = rbf_kernel(ai, b.row(j).transpose(), gamma);
  }
  return k;
}

SvrDualSolution solve_svr_dual(const Eigen::MatrixXd& gram, const Eigen::VectorXd& z, double c, double epsilon,
                               double tol, std::int64_t max_iter) {
  const Eigen::Index l = z.size();
  if (gram.rows() != l || gram.cols() != l) throw ModelError("Gram matrix does not match label count");
  if (!(c > 0.0)) throw ModelError("SVR penalty C must be positive");
  if (!(epsilon >= 0.0)) throw ModelError("SVR epsilon must be nonnegative");
  const Eigen::Index n = 2 * l;
  // Variable t < l is a_t (sign +1); t >= l is a*_{t-l} (sign -1).
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0), grad(static_cast<std::size_t>(n)),
      p(static_cast<std::size_t>(n)), qd(static_cast<std::size_t>(n));
  std::vector<signed char> sign(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < l; ++i) {
    sign[static_cast<std::size_t>(i)] = 1;
    sign[static_cast<std::size_t>(i + l)] = -1;
    p[static_cast<std::size_t>(i)] = epsilon - z(i);
    p[static_cast<std::size_t>(i + l)] = epsilon + z(i);
    qd[static_cast<std::size_t>(i)] = qd[static_cast<std::size_t>(i + l)] = gram(i, i);
  }
  grad = p;
  auto q = [&](Eigen::Index s, Eigen::Index t) {
    return static_cast<double>(sign[static_cast<std::size_t>(s)] * sign[static_cast<std::size_t>(t)]) *
           gram(s % l, t % l);
  };
  auto at_upper = [&](Eigen::Index t) { return alpha[static_cast<std::size_t>(t)] >= c; };
  auto at_lower = [&](Eigen::Index t) { return alpha[static_cast<std::size_t>(t)] <= 0.0; };

  SvrDualSolution sol;
  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double g = grad[static_cast<std::size_t>(t)];
      if (sign[static_cast<std::size_t>(t)] == 1) {
        if (!at_upper(t) && -g >= gmax) {
          gmax = -g;
          i = t;
        }
      } else if (!at_lower(t) && g >= gmax) {
        gmax = g;
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    if (i >= 0) {
      const double yi = sign[static_cast<std::size_t>(i)];
      for (Eigen::Index t = 0; t < n; ++t) {
        const double g = grad[static_cast<std::size_t>(t)];
        double diff = 0.0, quad = 0.0;
        if (sign[static_cast<std::size_t>(t)] == 1) {
          if (at_lower(t)) continue;
          gmax2 = std::max(gmax2, g);
          diff = gmax + g;
          quad = qd[static_cast<std::size_t>(i)] + qd[static_cast<std::size_t>(t)] - 2.0 * yi * q(i, t);
        } else {
          if (at_upper(t)) continue;
          gmax2 = std::max(gmax2, -g);
          diff = gmax - g;
          quad = qd[static_cast<std::size_t>(i)] + qd[static_cast<std::size_t>(t)] + 2.0 * yi * q(i, t);
        }
        if (diff > 0.0) {
          const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    sol.kkt_violation = (i < 0) ? 0.0 : std::max(0.0, gmax + gmax2);
    if (i < 0 || j < 0 || gmax + gmax2 < tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iter) break;
    ++sol.iterations;

    auto& ai = alpha[static_cast<std::size_t>(i)];
    auto& aj = alpha[static_cast<std::size_t>(j)];
    const double old_i = ai, old_j = aj;
    const double gi = grad[static_cast<std::size_t>(i)], gj = grad[static_cast<std::size_t>(j)];
    const double qij = q(i, j);
    if (sign[static_cast<std::size_t>(i)] != sign[static_cast<std::size_t>(j)]) {
      double quad = qd[static_cast<std::size_t>(i)] + qd[static_cast<std::size_t>(j)] + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-gi - gj) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = qd[static_cast<std::size_t>(i)] + qd[static_cast<std::size_t>(j)] - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (gi - gj) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    const double di = ai - old_i, dj = aj - old_j;
    for (Eigen::Index t = 0; t < n; ++t) grad[static_cast<std::size_t>(t)] += q(i, t) * di + q(j, t) * dj;
  }

  // Bias from free variables, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = sign[static_cast<std::size_t>(t)] * grad[static_cast<std::size_t>(t)];
    const bool pos = sign[static_cast<std::size_t>(t)] == 1;
    if (at_upper(t)) {
      if (pos) lb = std::max(lb, yg);
      else ub = std::min(ub, yg);
    } else if (at_lower(t)) {
      if (pos) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;

  double obj = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    obj += alpha[static_cast<std::size_t>(t)] * (grad[static_cast<std::size_t>(t)] + p[static_cast<std::size_t>(t)]);
  }
  sol.objective = obj / 2.0;
  sol.beta.resize(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    sol.beta(i) = alpha[static_cast<std::size_t>(i)] - alpha[static_cast<std::size_t>(i + l)];
  }
  return sol;
}

SvrModel assemble_svr(const Standardizer& standardizer, const Eigen::MatrixXd& z, const SvrDualSolution& solution,
                      const SvrOptions& options) {
  SvrModel m;
  m.standardizer = standardizer;
  m.c = options.c;
  m.gamma = options.gamma;
  m.epsilon = options.epsilon;
  m.bias = -solution.rho;
  m.objective = solution.objective;
  m.kkt_violation = solution.kkt_violation;
  m.iterations = solution.iterations;
  m.converged = solution.converged;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < solution.beta.size(); ++i) {
    if (solution.beta(i) != 0.0) keep.push_back(i);
  }
  m.support.resize(static_cast<Eigen::Index>(keep.size()), z.cols());
  m.dual_coef.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    m.support.row(static_cast<Eigen::Index>(k)) = z.row(keep[k]);
    m.dual_coef(static_cast<Eigen::Index>(k)) = solution.beta(keep[k]);
  }
  return m;
}

SvrModel fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrOptions& options) {
  if (x.rows() != y.size()) throw ModelError("feature rows and labels differ in length");
  if (x.rows() < 2) throw ModelError("need at least two training rows");
  if (!x.allFinite() || !y.allFinite()) throw ModelError("training data contains non-finite values");
  if (!(options.gamma > 0.0)) throw ModelError("SVR gamma must be positive");
  const Standardizer st = options.standardize ? Standardizer::fit(x) : Standardizer::identity(x.cols());
  const Eigen::MatrixXd z = st.transform(x);
  const Eigen::MatrixXd k = rbf_gram(z, z, options.gamma);
  const auto sol = solve_svr_dual(k, y, options.c, options.epsilon, options.tol, options.max_iter);
  return assemble_svr(st, z, sol, options);
}

double SvrModel::decision(const Eigen::VectorXd& z) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < support.rows(); ++i) {
    s += dual_coef(i) * rbf_kernel(support.row(i).transpose(), z, gamma);
  }
  return s + bias;
}

double SvrModel::predict(const Eigen::VectorXd& x) const { return decision(standardizer.transform(x)); }

Eigen::VectorXd SvrModel::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd z = standardizer.transform(x);
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = decision(z.row(i).transpose());
  return out;
}

}  // namespace qfrag::learn
