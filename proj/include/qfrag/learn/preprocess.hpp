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

#include <vector>

namespace qfrag::learn {

/// Per-column zero mean / unit variance transform fitted on training data.
/// Columns with zero variance keep scale 1 so they map to a constant 0.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x);
  static Standardizer identity(Eigen::Index dim);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
};

/// All monomials of total degree 1..degree over the input columns, ordered
/// by degree and then lexicographically by column index.
class PolynomialExpansion {
 public:
  PolynomialExpansion() = default;
  PolynomialExpansion(Eigen::Index input_dim, int degree);

  int degree() const { return degree_; }
  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const { return static_cast<Eigen::Index>(monomials_.size()); }
  const std::vector<std::vector<int>>& monomials() const { return monomials_; }

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;

 private:
  Eigen::Index input_dim_ = 0;
  int degree_ = 1;
  std::vector<std::vector<int>> monomials_;
};

}  // namespace qfrag::learn
