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

#include "qfrag/learn/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfrag/error.hpp"

namespace qfrag::learn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "qfrag-model";
constexpr int kFormatVersion = 1;

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd json_vec(const json& a) {
  if (!a.is_array()) throw ModelError("expected a numeric array in model file");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ModelError("non-numeric entry in model file");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

json mat_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

Eigen::MatrixXd json_mat(const json& a, Eigen::Index cols) {
  if (!a.is_array()) throw ModelError("expected a matrix in model file");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto row = json_vec(a[i]);
    if (row.size() != cols) throw ModelError("ragged matrix in model file");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

json std_json(const Standardizer& s) { return {{"mean", vec_json(s.mean)}, {"scale", vec_json(s.scale)}}; }

Standardizer json_std(const json& j) {
  Standardizer s{json_vec(j.at("mean")), json_vec(j.at("scale"))};
  if (s.mean.size() != static_cast<Eigen::Index>(kNumFeatures) || s.scale.size() != s.mean.size()) {
    throw ModelError("standardizer does not match the feature count");
  }
  for (Eigen::Index i = 0; i < s.scale.size(); ++i) {
    if (!(s.scale(i) > 0.0)) throw ModelError("standardizer scale must be positive");
  }
  return s;
}

json linear_json(const LinearModel& m) {
  return {{"degree", m.expansion.degree()},
          {"standardizer", std_json(m.standardizer)},
          {"weights", vec_json(m.weights)},
          {"intercept", m.intercept},
          {"strength", m.strength}};
}

LinearModel json_linear(const json& j, bool lasso) {
  LinearModel m;
  m.lasso = lasso;
  m.standardizer = json_std(j.at("standardizer"));
  m.expansion = PolynomialExpansion(static_cast<Eigen::Index>(kNumFeatures), j.at("degree").get<int>());
  m.weights = json_vec(j.at("weights"));
  m.intercept = j.at("intercept").get<double>();
  m.strength = j.value("strength", 0.0);
  if (m.weights.size() != m.expansion.output_dim()) {
    throw ModelError("weight count does not match the expanded feature dimension");
  }
  return m;
}

json forest_json(const ForestModel& f) {
  json trees = json::array();
  for (const auto& t : f.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    trees.push_back({{"seed", t.seed}, {"nodes", nodes}});
  }
  return {{"n_features", f.n_features}, {"feature_subset", f.feature_subset}, {"max_depth", f.max_depth},
          {"bootstrap", f.bootstrap},   {"seed", f.seed},                     {"trees", trees}};
}

ForestModel json_forest(const json& j) {
  ForestModel f;
  f.n_features = j.at("n_features").get<int>();
  if (f.n_features != static_cast<int>(kNumFeatures)) throw ModelError("forest does not match the feature count");
  f.feature_subset = j.value("feature_subset", 0);
  f.max_depth = j.value("max_depth", 0);
  f.bootstrap = j.value("bootstrap", true);
  f.seed = j.value("seed", std::uint64_t{0});
  for (const auto& tj : j.at("trees")) {
    RegressionTree t;
    t.seed = tj.value("seed", std::uint64_t{0});
    for (const auto& nj : tj.at("nodes")) {
      TreeNode n{nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<int>(), nj.at(3).get<int>(),
                 nj.at(4).get<double>()};
      t.nodes.push_back(n);
    }
    const int count = static_cast<int>(t.nodes.size());
    if (count == 0) throw ModelError("forest tree has no nodes");
    for (const auto& n : t.nodes) {
      if (!std::isfinite(n.value)) throw ModelError("forest leaf value is not finite");
      if (n.feature >= 0 && (n.feature >= f.n_features || n.left <= 0 || n.left >= count || n.right <= 0 ||
                             n.right >= count)) {
        throw ModelError("forest tree node is malformed");
      }
    }
    f.trees.push_back(std::move(t));
  }
  if (f.trees.empty()) throw ModelError("forest has no trees");
  return f;
}

json svr_json(const SvrModel& m) {
  return {{"c", m.c},
          {"gamma", m.gamma},
          {"epsilon", m.epsilon},
          {"bias", m.bias},
          {"standardizer", std_json(m.standardizer)},
          {"support_vectors", mat_json(m.support)},
          {"dual_coef", vec_json(m.dual_coef)}};
}

SvrModel json_svr(const json& j) {
  SvrModel m;
  m.c = j.at("c").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.epsilon = j.at("epsilon").get<double>();
  m.bias = j.at("bias").get<double>();
  m.standardizer = json_std(j.at("standardizer"));
  m.support = json_mat(j.at("support_vectors"), static_cast<Eigen::Index>(kNumFeatures));
  m.dual_coef = json_vec(j.at("dual_coef"));
  if (m.dual_coef.size() != m.support.rows()) throw ModelError("dual coefficient count does not match supports");
  for (Eigen::Index i = 0; i < m.dual_coef.size(); ++i) {
    if (std::abs(m.dual_coef(i)) > m.c * (1.0 + 1e-12)) throw ModelError("dual coefficient exceeds C");
  }
  return m;
}

}  // namespace

const char* family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::Linear: return "linear";
    case ModelFamily::Lasso: return "lasso";
    case ModelFamily::Forest: return "forest";
    case ModelFamily::Svr: return "svr";
  }
  return "?";
}

ModelFamily family_from_name(std::string_view name) {
  for (auto f : {ModelFamily::Linear, ModelFamily::Lasso, ModelFamily::Forest, ModelFamily::Svr}) {
    if (name == family_name(f)) return f;
  }
  throw ModelError("unknown model family '" + std::string(name) + "'");
}

ModelFamily TrainedModel::family() const {
  if (const auto* l = std::get_if<LinearModel>(&params)) return l->lasso ? ModelFamily::Lasso : ModelFamily::Linear;
  if (std::holds_alternative<ForestModel>(params)) return ModelFamily::Forest;
  return ModelFamily::Svr;
}

double TrainedModel::raw_predict(const Eigen::VectorXd& features) const {
  return std::visit([&](const auto& m) { return m.predict(features); }, params);
}

TrainedModel zero_model() {
  LinearModel m;
  m.standardizer = Standardizer::identity(static_cast<Eigen::Index>(kNumFeatures));
  m.expansion = PolynomialExpansion(static_cast<Eigen::Index>(kNumFeatures), 1);
  m.weights = Eigen::VectorXd::Zero(m.expansion.output_dim());
  return {m, kFeatureSchemaVersion};
}

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = kFormat;
  j["format_version"] = kFormatVersion;
  j["feature_schema"] = model.feature_schema;
  j["feature_columns"] = feature_column_names();
  j["family"] = family_name(model.family());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) j["params"] = linear_json(m);
        else if constexpr (std::is_same_v<T, ForestModel>) j["params"] = forest_json(m);
        else j["params"] = svr_json(m);
      },
      model.params);
  return j.dump(1) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormat) throw ModelError("not a qfrag model file");
    if (j.value("format_version", 0) != kFormatVersion) throw ModelError("unsupported model format version");
    TrainedModel m;
    m.feature_schema = j.at("feature_schema").get<std::string>();
    if (m.feature_schema != kFeatureSchemaVersion) {
      throw ModelError("model feature schema '" + m.feature_schema + "' does not match '" +
                       kFeatureSchemaVersion + "'");
    }
    const auto fam = family_from_name(j.at("family").get<std::string>());
    const auto& p = j.at("params");
    switch (fam) {
      case ModelFamily::Linear: m.params = json_linear(p, false); break;
      case ModelFamily::Lasso: m.params = json_linear(p, true); break;
      case ModelFamily::Forest: m.params = json_forest(p); break;
      case ModelFamily::Svr: m.params = json_svr(p); break;
    }
    return m;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  out << model_to_json(model);
  if (!out) throw ConfigError("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

Eigen::VectorXd feature_row(const FeatureVector& fv) {
  const auto a = fv.as_array();
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i];
  return v;
}

double predict_error(const TrainedModel& model, const FeatureVector& features) {
  if (model.feature_schema != kFeatureSchemaVersion) {
    throw ModelError("model feature schema '" + model.feature_schema + "' does not match '" + kFeatureSchemaVersion +
                     "'");
  }
  const double raw = model.raw_predict(feature_row(features));
  if (std::isnan(raw)) throw ModelError("model produced NaN");
  return std::clamp(raw, 0.0, 100.0);
}

double predict_error(const TrainedModel& model, const QuantumCircuit& circuit) {
  return predict_error(model, extract_features(circuit));
}

}  // namespace qfrag::learn
