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

#include "qfrag/circuit.hpp"
#include "qfrag/simulator.hpp"

namespace qfrag::learn {

struct ShotSweepResult {
  int best_exponent = 0;
  std::vector<int> exponents;
  std::vector<double> mean_errors;  // mean E_mean over the corpus at 2^x shots
  Eigen::VectorXd fit;              // polynomial coefficients, constant term first
  bool degenerate = false;          // all errors equal
};

/// Fits error ~ poly(x) of the given degree (lowered to fit the point count)
/// and returns the tested exponent where the fitted curve is smallest.
ShotSweepResult best_shot_exponent(const std::vector<int>& exponents, const std::vector<double>& errors,
                                   int degree = 3);

std::vector<int> default_shot_exponents();  // 1..13

ShotSweepResult shots_sweep(const std::vector<QuantumCircuit>& corpus, const NoiseModel& noise,
                            const std::vector<int>& exponents = default_shot_exponents(), int degree = 3);

}  // namespace qfrag::learn
