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

// Reference implementations used only by tests. Each one is written
// directly from the defining equations and shares no code with the library
// routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;
using Vector = std::vector<double>;

/// Solves A x = b by Gauss-Jordan elimination with partial pivoting in long
/// double precision.
inline Vector gauss_jordan_solve(Matrix a, Vector b) {
  const std::size_t n = b.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n] = b[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-300L) throw std::runtime_error("singular system");
    std::swap(m[piv], m[col]);
    const long double d = m[col][col];
    for (std::size_t j = col; j <= n; ++j) m[col][j] /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0.0L) continue;
      const long double f = m[r][col];
      for (std::size_t j = col; j <= n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(m[i][n]);
  return x;
}

/// Least squares with an explicit leading column of ones, through the
/// normal equations X^T X w = X^T y. Returns {intercept, w_1, ..., w_p}.
inline Vector ols(const Matrix& x, const Vector& y) {
  const std::size_t n = x.size(), p = x.empty() ? 0 : x[0].size() + 1;
  Matrix a(p, Vector(p, 0.0));
  Vector b(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    Vector row(p);
    row[0] = 1.0;
    for (std::size_t j = 1; j < p; ++j) row[j] = x[r][j - 1];
    for (std::size_t i = 0; i < p; ++i) {
      b[i] += row[i] * y[r];
      for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
    }
  }
  return gauss_jordan_solve(a, b);
}

/// Greedy regression tree grown by trying every feature and every midpoint
/// threshold and scoring each split by a direct two-pass sum of squares.
struct Tree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;
  };
  std::vector<Node> nodes;

  double predict(const Vector& x) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }
};

inline double sum_sq_dev(const Vector& y, const std::vector<int>& rows) {
  double mean = 0.0;
  for (int r : rows) mean += y[static_cast<std::size_t>(r)];
  mean /= static_cast<double>(rows.size());
  double s = 0.0;
  for (int r : rows) s += (y[static_cast<std::size_t>(r)] - mean) * (y[static_cast<std::size_t>(r)] - mean);
  return s;
}

inline int grow_tree(Tree& t, const Matrix& x, const Vector& y, const std::vector<int>& rows, int depth,
                     int max_depth) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  double mean = 0.0;
  for (int r : rows) mean += y[static_cast<std::size_t>(r)];
  t.nodes.back().value = mean / static_cast<double>(rows.size());
  if ((max_depth > 0 && depth >= max_depth) || rows.size() < 2 || sum_sq_dev(y, rows) <= 1e-12) return id;
  int best_f = -1;
  double best_t = 0.0, best = std::numeric_limits<double>::infinity();
  const std::size_t d = x[0].size();
  for (std::size_t f = 0; f < d; ++f) {
    std::vector<double> vals;
    for (int r : rows) vals.push_back(x[static_cast<std::size_t>(r)][f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double thr = vals[k] + (vals[k + 1] - vals[k]) / 2.0;
      std::vector<int> l, r;
      for (int row : rows) (x[static_cast<std::size_t>(row)][f] <= thr ? l : r).push_back(row);
      const double s = sum_sq_dev(y, l) + sum_sq_dev(y, r);
      if (s < best - 1e-9 * std::max(1.0, best == std::numeric_limits<double>::infinity() ? 1.0 : best)) {
        best = s;
        best_f = static_cast<int>(f);
        best_t = thr;
      }
    }
  }
  if (best_f < 0) return id;
  std::vector<int> l, r;
  for (int row : rows) (x[static_cast<std::size_t>(row)][static_cast<std::size_t>(best_f)] <= best_t ? l : r).push_back(row);
  const int li = grow_tree(t, x, y, l, depth + 1, max_depth);
  const int ri = grow_tree(t, x, y, r, depth + 1, max_depth);
  auto& n = t.nodes[static_cast<std::size_t>(id)];
  n.feature = best_f;
  n.threshold = best_t;
  n.left = li;
  n.right = ri;
  return id;
}

inline Tree regression_tree(const Matrix& x, const Vector& y, int max_depth) {
  Tree t;
  std::vector<int> rows(y.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  grow_tree(t, x, y, rows, 0, max_depth);
  return t;
}

/// Minimum of the epsilon-SVR dual over beta = a - a*:
///   1/2 sum_ij a_i a_j s_i s_j K_ij + sum_i a_i (eps - s_i y_i)
/// over 2l box-constrained variables with sum_i s_i a_i = 0, found by
/// accelerated projected gradient. The projection onto the box intersected
/// with the hyperplane is found by bisection on its multiplier.
inline double svr_dual_objective(const Matrix& k, const Vector& y, double c, double eps, int iters = 100000) {
  const std::size_t l = y.size(), n = 2 * l;
  auto sgn = [&](std::size_t t) { return t < l ? 1.0 : -1.0; };
  auto kk = [&](std::size_t s, std::size_t t) { return k[s % l][t % l]; };
  Vector lin(n);
  for (std::size_t t = 0; t < n; ++t) lin[t] = eps - sgn(t) * y[t % l];
  // Power iteration for the largest eigenvalue of the 2l-variable Hessian.
  Vector v(n, 1.0);
  double lam = 1.0;
  for (int it = 0; it < 500; ++it) {
    Vector w(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) w[s] += sgn(s) * sgn(t) * kk(s, t) * v[t];
    double norm = 0.0;
    for (double e : w) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    lam = norm;
    for (std::size_t t = 0; t < n; ++t) v[t] = w[t] / norm;
  }
  const double step = 1.0 / (lam * 1.01);
  auto project = [&](const Vector& z) {
    auto at = [&](double mu) {
      Vector a(n);
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        a[t] = std::clamp(z[t] - mu * sgn(t), 0.0, c);
        s += sgn(t) * a[t];
      }
      return std::make_pair(a, s);
    };
    double span = c;
    for (double e : z) span = std::max(span, std::fabs(e));
    double lo = -2.0 * span - 1.0, hi = 2.0 * span + 1.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = (lo + hi) / 2.0;
      if (at(mid).second > 0.0) lo = mid;
      else hi = mid;
    }
    return at((lo + hi) / 2.0).first;
  };
  auto objective = [&](const Vector& a) {
    double o = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (a[s] == 0.0) continue;
      double q = 0.0;
      for (std::size_t t = 0; t < n; ++t) q += sgn(s) * sgn(t) * kk(s, t) * a[t];
      o += a[s] * (0.5 * q + lin[s]);
    }
    return o;
  };
  Vector a(n, 0.0), prev = a, z = a;
  double tk = 1.0;
  for (int it = 0; it < iters; ++it) {
    Vector g(n);
    for (std::size_t s = 0; s < n; ++s) {
      double q = 0.0;
      for (std::size_t t = 0; t < n; ++t) q += sgn(s) * sgn(t) * kk(s, t) * z[t];
      g[s] = z[s] - step * (q + lin[s]);
    }
    prev = a;
    a = project(g);
    // Restart the momentum whenever it points uphill.
    double uphill = 0.0;
    for (std::size_t t = 0; t < n; ++t) uphill += (z[t] - a[t]) * (a[t] - prev[t]);
    if (uphill > 0.0) tk = 1.0;
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * tk * tk)) / 2.0;
    for (std::size_t t = 0; t < n; ++t) z[t] = a[t] + (tk - 1.0) / tn * (a[t] - prev[t]);
    tk = tn;
    if (it % 1000 == 999) {
      double diff = 0.0;
      for (std::size_t t = 0; t < n; ++t) diff = std::max(diff, std::fabs(a[t] - prev[t]));
      if (diff < 1e-13) break;
    }
  }
  return objective(a);
}

}  // namespace oracle
