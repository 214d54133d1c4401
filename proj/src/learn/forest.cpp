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

#include "qfrag/learn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qfrag/error.hpp"
#include "qfrag/simulator.hpp"

namespace qfrag::learn {

namespace {

struct Grower {
  const Eigen::MatrixXd& x;
  const Eigen::VectorXd& y;
  const ForestOptions& opt;
  std::mt19937_64 rng;
  RegressionTree tree;

  std::vector<int> pick_features() {
    const int d = static_cast<int>(x.cols());
    std::vector<int> all(static_cast<std::size_t>(d));
    std::iota(all.begin(), all.end(), 0);
    const int m = opt.feature_subset <= 0 ? d : std::min(opt.feature_subset, d);
    if (m == d) return all;
    for (int i = 0; i < m; ++i) {
      const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(d - i));
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(m));
    std::sort(all.begin(), all.end());
    return all;
  }

  int grow(std::vector<int> rows, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double mean = 0.0;
    for (int r : rows) mean += y(r);
    mean /= static_cast<double>(rows.size());
    double sse = 0.0;
    for (int r : rows) sse += (y(r) - mean) * (y(r) - mean);
    tree.nodes[static_cast<std::size_t>(id)].value = mean;

    const bool depth_ok = opt.max_depth <= 0 || depth < opt.max_depth;
    if (!depth_ok || static_cast<int>(rows.size()) < std::max(2, opt.min_samples_split) || sse <= 1e-12) return id;

    int best_f = -1;
    double best_t = 0.0, best_sse = std::numeric_limits<double>::infinity();
    std::vector<int> order = rows;
    for (int f : pick_features()) {
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
      });
      double total = 0.0, total_sq = 0.0;
      for (int r : order) {
        total += y(r);
        total_sq += y(r) * y(r);
      }
      double left = 0.0, left_sq = 0.0;
      const std::size_t n = order.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const int r = order[i];
        left += y(r);
        left_sq += y(r) * y(r);
        const double a = x(r, f), b = x(order[i + 1], f);
        if (!(a < b)) continue;
        const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
        const double right = total - left, right_sq = total_sq - left_sq;
        const double s = std::max(0.0, left_sq - left * left / nl) + std::max(0.0, right_sq - right * right / nr);
        const double margin = std::isinf(best_sse) ? 0.0 : 1e-10 * best_sse;
        if (s < best_sse - margin) {
          best_sse = s;
          best_f = f;
          best_t = a + (b - a) / 2.0;
        }
      }
    }
    if (best_f < 0) return id;

    std::vector<int> lrows, rrows;
    for (int r : rows) (x(r, best_f) <= best_t ? lrows : rrows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(lrows), depth + 1);
    const int rr = grow(std::move(rrows), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best_f;
    node.threshold = best_t;
    node.left = l;
    node.right = rr;
    return id;
  }
};

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw ModelError("feature rows and labels differ in length");
  if (x.rows() < 2) throw ModelError("need at least two training rows");
  if (!x.allFinite() || !y.allFinite()) throw ModelError("training data contains non-finite values");
}

}  // namespace

double RegressionTree::predict(const Eigen::VectorXd& x) const {
  if (nodes.empty()) throw ModelError("empty regression tree");
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    i = x(n.feature) <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

int RegressionTree::depth() const {
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes[i].feature >= 0) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

int RegressionTree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

RegressionTree fit_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<int>& rows,
                        const ForestOptions& options, std::uint64_t seed) {
  check_inputs(x, y);
  if (rows.empty()) throw ModelError("regression tree needs at least one row");
  Grower g{x, y, options, std::mt19937_64(seed), {}};
  g.tree.seed = seed;
  g.grow(rows, 0);
  return std::move(g.tree);
}

ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestOptions& options) {
  check_inputs(x, y);
  if (options.n_trees < 1) throw ModelError("forest needs at least one tree");
  ForestModel f;
  f.n_features = static_cast<int>(x.cols());
  f.feature_subset = options.feature_subset;
  f.max_depth = options.max_depth;
  f.bootstrap = options.bootstrap;
  f.seed = options.seed;
  const auto n = static_cast<std::uint64_t>(x.rows());
  for (int m = 0; m < options.n_trees; ++m) {
    const std::uint64_t theta = mix_seed(options.seed, static_cast<std::uint64_t>(m));
    std::vector<int> rows(static_cast<std::size_t>(n));
    if (options.bootstrap) {
      std::mt19937_64 rng(theta);
      for (auto& r : rows) r = static_cast<int>(rng() % n);
      f.trees.push_back(fit_tree(x, y, rows, options, mix_seed(theta, 1)));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
      f.trees.push_back(fit_tree(x, y, rows, options, theta));
    }
    f.trees.back().seed = theta;
  }
  return f;
}

double ForestModel::predict(const Eigen::VectorXd& x) const {
  if (trees.empty()) throw ModelError("forest has no trees");
  if (x.size() != n_features) throw ModelError("forest feature dimension mismatch");
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(x);
  return s / static_cast<double>(trees.size());
}

Eigen::VectorXd ForestModel::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = predict(Eigen::VectorXd(x.row(i).transpose()));
  return out;
}

}  // namespace qfrag::learn
