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

#include <optional>
#include <set>
#include <span>
#include <string>

#include "qfrag/distribution.hpp"

namespace qfrag {

/// Outcomes to compare. Empty optional means the union of both supports.
using MarkedStates = std::optional<std::set<Bits>>;

/// Mean of |ideal - noisy| over the compared states, on the 0-100 scale.
double mean_abs_error(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy,
                      const MarkedStates& marked = std::nullopt);

/// Root mean square of (ideal - noisy) over the compared states, 0-100 scale.
double rms_error(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy,
                 const MarkedStates& marked = std::nullopt);

double hellinger_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// (1 - H^2)^2. Both inputs must sum to 1 within 1e-6.
double hellinger_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q);

struct ErrorReport {
  double e_mean = 0.0;
  double e_rmse = 0.0;
  double hellinger_fidelity = 1.0;
  std::size_t n_states = 0;

  static std::string csv_header();
  std::string csv_row() const;
};

ErrorReport error_report(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy,
                         const MarkedStates& marked = std::nullopt);

/// 1 - SS_res / SS_tot with SS_tot = sum(actual^2), the uncentered total
/// sum of squares.
double r_squared(std::span<const double> actual, std::span<const double> predicted);

/// Conventional 1 - SS_res / sum((actual - mean)^2).
double centered_r_squared(std::span<const double> actual, std::span<const double> predicted);

struct Scorecard {
  double rmse = 0.0;
  double mse = 0.0;
  double mean_error = 0.0;  // mean absolute error
  double r2 = 0.0;          // uncentered, see r_squared
  double adjusted_r2 = 0.0;
  double centered_r2 = 0.0;
};

/// Adjusted R^2 = 1 - (1 - R^2)(n - 1)/(n - k - 1); requires n > k + 1.
Scorecard model_scorecard(std::span<const double> actual, std::span<const double> predicted, int n_features);

}  // namespace qfrag
