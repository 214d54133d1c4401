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

#include "qfrag/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "qfrag/error.hpp"

namespace qfrag {

namespace {

std::set<Bits> compared_states(const OutcomeDistribution& a, const OutcomeDistribution& b, const MarkedStates& marked) {
  if (a.n_bits() != b.n_bits()) {
    throw MetricError("distribution widths differ (" + std::to_string(a.n_bits()) + " vs " +
                      std::to_string(b.n_bits()) + ")");
  }
  if (marked) {
    if (marked->empty()) throw MetricError("marked state set is empty");
    return *marked;
  }
  std::set<Bits> states;
  for (const auto& [k, p] : a.probs()) states.insert(k);
  for (const auto& [k, p] : b.probs()) states.insert(k);
  return states;
}

void check_lengths(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw MetricError("actual and predicted lengths differ");
  if (actual.empty()) throw MetricError("need at least one sample");
}

}  // namespace

double mean_abs_error(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy, const MarkedStates& marked) {
  const auto states = compared_states(ideal, noisy, marked);
  if (states.empty()) return 0.0;
  double s = 0.0;
  for (Bits k : states) s += std::abs(100.0 * ideal[k] - 100.0 * noisy[k]);
  return s / static_cast<double>(states.size());
}

double rms_error(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy, const MarkedStates& marked) {
  const auto states = compared_states(ideal, noisy, marked);
  if (states.empty()) return 0.0;
  double s = 0.0;
  for (Bits k : states) {
    const double d = 100.0 * ideal[k] - 100.0 * noisy[k];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(states.size()));
}

double hellinger_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.n_bits() != q.n_bits()) throw MetricError("distribution widths differ");
  for (const auto* d : {&p, &q}) {
    if (std::abs(d->total() - 1.0) > 1e-6) throw MetricError("Hellinger inputs must be normalized");
    for (const auto& [k, v] : d->probs()) {
      if (v < 0.0) throw MetricError("Hellinger inputs must be nonnegative");
    }
  }
  // Walk the merged key order so that swapping p and q sums identical terms
  // in identical order.
  double s = 0.0;
  for (Bits k : compared_states(p, q, std::nullopt)) {
    const double d = std::sqrt(p[k]) - std::sqrt(q[k]);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(s / 2.0));
}

double hellinger_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  const double h = hellinger_distance(p, q);
  const double one_minus = 1.0 - h * h;
  return one_minus * one_minus;
}

std::string ErrorReport::csv_header() { return "e_mean,e_rmse,hellinger_fidelity,n_states"; }

std::string ErrorReport::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%zu", e_mean, e_rmse, hellinger_fidelity, n_states);
  return buf;
}

ErrorReport error_report(const OutcomeDistribution& ideal, const OutcomeDistribution& noisy, const MarkedStates& marked) {
  ErrorReport r;
  r.e_mean = mean_abs_error(ideal, noisy, marked);
  r.e_rmse = rms_error(ideal, noisy, marked);
  r.hellinger_fidelity = hellinger_fidelity(ideal, noisy);
  r.n_states = compared_states(ideal, noisy, marked).size();
  return r;
}

double r_squared(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths(actual, predicted);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += actual[i] * actual[i];
  }
  if (ss_tot == 0.0) throw MetricError("R^2 undefined: total sum of squares is zero");
  return 1.0 - ss_res / ss_tot;
}

double centered_r_squared(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths(actual, predicted);
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (ss_tot == 0.0) throw MetricError("centered R^2 undefined: actual values are constant");
  return 1.0 - ss_res / ss_tot;
}

Scorecard model_scorecard(std::span<const double> actual, std::span<const double> predicted, int n_features) {
  check_lengths(actual, predicted);
  const auto n = static_cast<double>(actual.size());
  if (n_features < 0 || n <= n_features + 1.0) {
    throw MetricError("adjusted R^2 needs more samples than features + 1");
  }
  Scorecard s;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    s.mse += d * d;
    s.mean_error += std::abs(d);
  }
  s.mse /= n;
  s.mean_error /= n;
  s.rmse = std::sqrt(s.mse);
  s.r2 = r_squared(actual, predicted);
  s.adjusted_r2 = 1.0 - (1.0 - s.r2) * (n - 1.0) / (n - n_features - 1.0);
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= n;
  bool constant = true;
  for (double a : actual) constant = constant && a == mean;
  s.centered_r2 = constant ? std::nan("") : centered_r_squared(actual, predicted);
  return s;
}

}  // namespace qfrag
