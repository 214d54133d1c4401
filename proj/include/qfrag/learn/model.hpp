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

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "qfrag/circuit.hpp"
#include "qfrag/features.hpp"
#include "qfrag/learn/forest.hpp"
#include "qfrag/learn/linear.hpp"
#include "qfrag/learn/svr.hpp"

namespace qfrag::learn {

enum class ModelFamily { Linear, Lasso, Forest, Svr };

const char* family_name(ModelFamily f);
ModelFamily family_from_name(std::string_view name);

using ModelParams = std::variant<LinearModel, ForestModel, SvrModel>;

/// A trained error predictor tagged with the feature layout it was fit on.
struct TrainedModel {
  ModelParams params;
  std::string feature_schema = kFeatureSchemaVersion;

  ModelFamily family() const;
  /// Raw model output on a 19-value feature row.
  double raw_predict(const Eigen::VectorXd& features) const;
};

/// Constant predictor: every weight and the intercept are zero.
TrainedModel zero_model();

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

Eigen::VectorXd feature_row(const FeatureVector& fv);

/// Predicted error percent of the circuit, clamped to [0, 100].
double predict_error(const TrainedModel& model, const QuantumCircuit& circuit);
double predict_error(const TrainedModel& model, const FeatureVector& features);

}  // namespace qfrag::learn
