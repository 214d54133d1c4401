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

#include "qfrag/learn/shots.hpp"

#include <algorithm>
#include <cmath>

#include "qfrag/error.hpp"
#include "qfrag/metrics.hpp"

namespace qfrag::learn {

std::vector<int> default_shot_exponents() {
  std::vector<int> e;
  for (int x = 1; x <= 13; ++x) e.push_back(x);
  return e;
}

ShotSweepResult best_shot_exponent(const std::vector<int>& exponents, const std::vector<double>& errors, int degree) {
  if (exponents.empty()) throw ModelError("shot sweep needs at least one exponent");
  if (exponents.size() != errors.size()) throw ModelError("exponents and errors differ in length");
  if (degree < 1) throw ModelError("polynomial degree must be at least 1");
  ShotSweepResult r;
  r.exponents = exponents;
  r.mean_errors = errors;
  const auto smallest = *std::min_element(exponents.begin(), exponents.end());
  if (std::all_of(errors.begin(), errors.end(), [&](double e) { return e == errors.front(); })) {
    r.degenerate = true;
    r.best_exponent = smallest;
    r.fit = Eigen::VectorXd::Constant(1, errors.front());
    return r;
  }
  const auto n = static_cast<Eigen::Index>(exponents.size());
  const int d = std::min<int>(degree, static_cast<int>(n) - 1);
  Eigen::MatrixXd v(n, d + 1);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = exponents[static_cast<std::size_t>(i)];
    for (int k = 0; k <= d; ++k) v(i, k) = std::pow(x, k);
    e(i) = errors[static_cast<std::size_t>(i)];
  }
  r.fit = v.colPivHouseholderQr().solve(e);
  double best = 0.0;
  bool have = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double val = v.row(i).dot(r.fit);
    const int x = exponents[static_cast<std::size_t>(i)];
    if (!have || val < best || (val == best && x < r.best_exponent)) {
      best = val;
      r.best_exponent = x;
      have = true;
    }
  }
  return r;
}

ShotSweepResult shots_sweep(const std::vector<QuantumCircuit>& corpus, const NoiseModel& noise,
                            const std::vector<int>& exponents, int degree) {
  if (corpus.empty()) throw ModelError("shot sweep needs a nonempty corpus");
  if (exponents.empty()) throw ModelError("shot sweep needs at least one exponent");
  std::vector<OutcomeDistribution> ideal;
  for (const auto& c : corpus) ideal.push_back(simulate_ideal(c));
  std::vector<double> errors;
  for (int x : exponents) {
    if (x < 0 || x > 40) throw ModelError("shot exponent out of range");
    double total = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      NoiseModel nm = noise;
      nm.seed = mix_seed(mix_seed(noise.seed, i), static_cast<std::uint64_t>(x));
      total += mean_abs_error(ideal[i], simulate_noisy(corpus[i], nm, std::uint64_t{1} << x));
    }
    errors.push_back(total / static_cast<double>(corpus.size()));
  }
  return best_shot_exponent(exponents, errors, degree);
}

}  // namespace qfrag::learn
