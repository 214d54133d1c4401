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
#include <optional>

#include "qfrag/learn/forest.hpp"
#include "qfrag/learn/grid_search.hpp"
#include "qfrag/learn/model.hpp"
#include "qfrag/learn/svr.hpp"

namespace qfrag::learn {

struct TrainOptions {
  ModelFamily family = ModelFamily::Svr;
  int degree = 1;               // linear and lasso feature expansion
  double lasso_strength = 0.1;
  ForestOptions forest{};
  SvrOptions svr{};             // c and gamma are ignored when grid is set
  bool grid = true;
  GridSpec grid_spec = GridSpec::coarse_fine();
};

struct TrainOutcome {
  TrainedModel model;
  std::optional<GridResult> grid;  // set when the SVR hyperparameters were searched
};

TrainOutcome train_model(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainOptions& options);

}  // namespace qfrag::learn
