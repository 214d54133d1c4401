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

#include "qfrag/learn/preprocess.hpp"

#include <cmath>
#include <functional>

#include "qfrag/error.hpp"

namespace qfrag::learn {

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw ModelError("cannot standardize an empty matrix");
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    const double sd = std::sqrt(var);
    s.scale(j) = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::identity(Eigen::Index dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw ModelError("standardizer dimension mismatch");
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Standardizer::transform(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) throw ModelError("standardizer dimension mismatch");
  return ((x - mean).array() / scale.array()).matrix();
}

PolynomialExpansion::PolynomialExpansion(Eigen::Index input_dim, int degree) : input_dim_(input_dim), degree_(degree) {
  if (degree < 1) throw ModelError("polynomial degree must be at least 1");
  if (input_dim < 1) throw ModelError("polynomial expansion needs at least one input column");
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (remaining == 0) {
      monomials_.push_back(current);
      return;
    }
    for (int j = start; j < input_dim; ++j) {
      current.push_back(j);
      rec(j, remaining - 1);
      current.pop_back();
    }
  };
  for (int d = 1; d <= degree; ++d) rec(0, d);
}

Eigen::MatrixXd PolynomialExpansion::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) throw ModelError("polynomial expansion dimension mismatch");
  Eigen::MatrixXd out(x.rows(), output_dim());
  for (Eigen::Index c = 0; c < output_dim(); ++c) {
    Eigen::ArrayXd col = Eigen::ArrayXd::Ones(x.rows());
    for (int j : monomials_[c]) col *= x.col(j).array();
    out.col(c) = col.matrix();
  }
  return out;
}

Eigen::VectorXd PolynomialExpansion::transform(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd row = x.transpose();
  return transform(row).row(0).transpose();
}

}  // namespace qfrag::learn
