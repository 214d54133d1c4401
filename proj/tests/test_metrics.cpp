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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qfrag/error.hpp"
#include "qfrag/metrics.hpp"

using namespace qfrag;

namespace {

OutcomeDistribution dist(int n, std::initializer_list<std::pair<const char*, double>> entries) {
  OutcomeDistribution d(n);
  for (auto [bits, p] : entries) d.set(bits_from_string(bits), p);
  return d;
}

OutcomeDistribution random_dist(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OutcomeDistribution d(n);
  for (Bits k = 0; k < (Bits{1} << n); ++k) {
    if (u(rng) < 0.6) d.set(k, u(rng));
  }
  if (d.support_size() == 0) d.set(0, 1.0);
  d.normalize();
  return d;
}

}  // namespace

TEST_CASE("mean absolute and rms error") {
  auto ideal = dist(1, {{"0", 1.0}});
  auto half = dist(1, {{"0", 0.5}, {"1", 0.5}});
  CHECK(mean_abs_error(ideal, ideal) == 0.0);
  CHECK(rms_error(ideal, ideal) == 0.0);
  CHECK(mean_abs_error(ideal, half) == doctest::Approx(50.0));
  CHECK(rms_error(ideal, half) == doctest::Approx(50.0));

  auto i2 = dist(2, {{"00", 1.0}});
  auto n2 = dist(2, {{"00", 0.7}, {"11", 0.3}});
  CHECK(rms_error(i2, n2) == doctest::Approx(30.0));

  // Marked set restricts N.
  MarkedStates marked = std::set<Bits>{0};
  CHECK(mean_abs_error(i2, n2, marked) == doctest::Approx(30.0));
  MarkedStates four = std::set<Bits>{0, 1, 2, 3};
  CHECK(mean_abs_error(i2, n2, four) == doctest::Approx(15.0));

  CHECK_THROWS_AS(mean_abs_error(ideal, i2), MetricError);
  CHECK_THROWS_AS(rms_error(ideal, i2), MetricError);
}

TEST_CASE("hellinger fidelity") {
  auto p = dist(1, {{"0", 1.0}});
  auto q = dist(1, {{"1", 1.0}});
  auto h = dist(1, {{"0", 0.5}, {"1", 0.5}});
  CHECK(hellinger_fidelity(p, p) == 1.0);
  CHECK(hellinger_fidelity(p, q) == 0.0);
  const double h2 = 1.0 - std::sqrt(0.5);
  CHECK(hellinger_distance(p, h) * hellinger_distance(p, h) == doctest::Approx(h2).epsilon(1e-12));
  CHECK(hellinger_fidelity(p, h) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(hellinger_fidelity(p, dist(1, {{"0", 0.5}})), MetricError);
}

TEST_CASE("metric properties on random distributions") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 4);
    auto p = random_dist(n, rng);
    auto q = random_dist(n, rng);
    CHECK(hellinger_fidelity(p, q) == hellinger_fidelity(q, p));
    const double h = hellinger_distance(p, q);
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
    CHECK(mean_abs_error(p, p) == 0.0);
    CHECK(rms_error(q, q) == 0.0);
    if (!(p == q)) {
      CHECK(mean_abs_error(p, q) > 0.0);
      CHECK(rms_error(p, q) > 0.0);
    }
  }
}

TEST_CASE("r squared uses the uncentered total sum of squares") {
  std::vector<double> a{64.343}, p{59.210};
  CHECK(r_squared(a, p) == doctest::Approx(1.0 - 26.347 / 4140.021).epsilon(1e-4));
  CHECK(std::abs(r_squared(a, p) - 0.993) < 0.001);
  std::vector<double> ones{1, 1}, zeros{0, 0};
  CHECK(r_squared(ones, zeros) == 0.0);
  CHECK(r_squared(ones, ones) == 1.0);
  CHECK_THROWS_AS(r_squared(zeros, ones), MetricError);
  CHECK_THROWS_AS(r_squared(ones, a), MetricError);
}

TEST_CASE("model scorecard") {
  std::vector<double> a{1, 2, 3}, p{1, 2, 4};
  auto s = model_scorecard(a, p, 1);
  CHECK(s.mse == doctest::Approx(1.0 / 3.0));
  CHECK(s.rmse == doctest::Approx(0.5773502692));
  CHECK(s.mean_error == doctest::Approx(1.0 / 3.0));
  CHECK(s.r2 == doctest::Approx(1.0 - 1.0 / 14.0));
  CHECK(s.adjusted_r2 == doctest::Approx(1.0 - (1.0 / 14.0) * 2.0 / 1.0));
  CHECK(s.centered_r2 == doctest::Approx(1.0 - 1.0 / 2.0));

  auto perfect = model_scorecard(a, a, 1);
  CHECK(perfect.rmse == 0.0);
  CHECK(perfect.r2 == 1.0);
  CHECK(perfect.adjusted_r2 == 1.0);

  CHECK_THROWS_AS(model_scorecard(a, p, 2), MetricError);
}

TEST_CASE("error report csv") {
  auto ideal = dist(1, {{"0", 1.0}});
  auto half = dist(1, {{"0", 0.5}, {"1", 0.5}});
  auto r = error_report(ideal, half);
  CHECK(r.n_states == 2);
  CHECK(r.csv_row() == "50,50,0.5,2");
  CHECK(ErrorReport::csv_header() == "e_mean,e_rmse,hellinger_fidelity,n_states");
}
