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

#include "qfrag/learn/train.hpp"

#include "qfrag/learn/linear.hpp"

namespace qfrag::learn {

TrainOutcome train_model(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainOptions& options) {
  TrainOutcome out;
  switch (options.family) {
    case ModelFamily::Linear: {
      LinearOptions o;
      o.degree = options.degree;
      out.model.params = fit_linear(x, y, o);
      break;
    }
    case ModelFamily::Lasso: {
      LassoOptions o;
      o.degree = options.degree;
      out.model.params = fit_lasso(x, y, options.lasso_strength, o);
      break;
    }
    case ModelFamily::Forest:
      out.model.params = fit_forest(x, y, options.forest);
      break;
    case ModelFamily::Svr: {
      SvrOptions o = options.svr;
      if (options.grid) {
        out.grid = grid_search(x, y, options.grid_spec, o);
        o.c = out.grid->c;
        o.gamma = out.grid->gamma;
      }
      out.model.params = fit_svr(x, y, o);
      break;
    }
  }
  return out;
}

}  // namespace qfrag::learn
