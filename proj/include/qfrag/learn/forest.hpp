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

namespace qfrag::learn {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;   // rows with x[feature] <= threshold
  int right = -1;
  double value = 0.0;  // mean label of the rows reaching this node
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::uint64_t seed = 0;

  double predict(const Eigen::VectorXd& x) const;
  int depth() const;
  int leaf_count() const;
};

struct ForestOptions {
  int n_trees = 100;
  int max_depth = 12;         // 0 means unlimited
  int feature_subset = 0;     // features tried per node; 0 means all
  int min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  int n_features = 0;
  int feature_subset = 0;
  int max_depth = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  double predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// CART regression tree grown greedily on squared-error reduction. Split
/// thresholds are midpoints between consecutive distinct values; ties go to
/// the lowest feature index and then the lowest threshold.
RegressionTree fit_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<int>& rows,
                        const ForestOptions& options, std::uint64_t seed);

/// Tree m is grown from the generator seeded with mix_seed(options.seed, m).
ForestModel fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestOptions& options = {});

}  // namespace qfrag::learn
