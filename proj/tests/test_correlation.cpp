/*
 * Copyright 2026 The twocharge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "twocharge/correlation.hpp"
#include "twocharge/ensemble.hpp"
#include "twocharge/oracle.hpp"

using namespace twocharge;

namespace {

// R_{2,0}(0, d) at N = 4 by direct integration of the sector densities
// (L, M) = (4, 0) and (2, 1) with a periodic midpoint rule.
double brute_r20_n4(double x, double d) {
  const int p = 720;
  const double h = kTwoPi / p;
  double four = 0.0;
  double two_one = 0.0;
  std::vector<double> xi(4);
  for (int a = 0; a < p; ++a) {
    const double u = (a + 0.5) * h;
    const double z[1] = {u};
    const double pair[2] = {0.0, d};
    two_one += std::exp(-energy(pair, z)) * h;
    for (int b = 0; b < p; ++b) {
      xi = {0.0, d, u, (b + 0.5) * h};
      four += std::exp(-energy(xi, {})) * h * h;
    }
  }
  // X^L / ((L-2)! M!) with the two marked charge-1 particles labeled.
  const double num = std::pow(x, 4) / 2.0 * four + x * x * two_one;
  return num / std::exp(log_partition(EnsembleParams(4, x)));
}

}  // namespace

TEST_CASE("N = 2 intensities match the sector formulas") {
  for (double x : {0.5, 1.0, 2.0}) {
    for (double a : {-2.0, 0.0, 1.0, 3.0}) {
      CorrelationQuery q;
      q.n = 2;
      q.fugacity = x;
      q.x = {a};
      CHECK(intensity(q) == doctest::Approx(oracle_intensity(2, x, q.x, q.z)).epsilon(1e-12));
      q.x = {};
      q.z = {a};
      CHECK(intensity(q) == doctest::Approx(oracle_intensity(2, x, q.x, q.z)).epsilon(1e-12));
      q.x = {a, 0.25};
      q.z = {};
      CHECK(intensity(q) == doctest::Approx(oracle_intensity(2, x, q.x, q.z)).epsilon(1e-12));
      q.x = {a};
      q.z = {0.25};
      CHECK(std::abs(intensity(q)) < 1e-14);
    }
  }
}

TEST_CASE("N = 4 pair intensity matches direct integration") {
  for (double d : {0.4, 1.5, 3.0}) {
    CorrelationQuery q;
    q.n = 4;
    q.fugacity = 0.7;
    q.x = {0.0, d};
    CHECK(intensity(q) == doctest::Approx(brute_r20_n4(0.7, d)).epsilon(2e-4));
  }
}

TEST_CASE("one-point intensities are mean counts over 2 pi") {
  const EnsembleParams p(8, 2.0);
  CorrelationQuery q;
  q.n = 8;
  q.fugacity = 2.0;
  q.x = {1.0};
  CHECK(intensity(q) == doctest::Approx(mean_count(p) / kTwoPi).epsilon(1e-12));
  q.x = {};
  q.z = {-2.0};
  CHECK(intensity(q) == doctest::Approx(0.5 * (8.0 - mean_count(p)) / kTwoPi).epsilon(1e-12));
}

TEST_CASE("intensities are rotation invariant and gauge invariant") {
  CorrelationQuery q;
  q.n = 8;
  q.fugacity = 2.0;
  q.x = {0.3, 1.9};
  q.z = {-2.2};
  const double base = intensity(q);
  CHECK(base > 0.0);
  CorrelationQuery shifted = q;
  for (double& a : shifted.x) a += 2.5;
  for (double& a : shifted.z) a += 2.5;
  CHECK(intensity(shifted) == doctest::Approx(base).epsilon(1e-10));
  q.gauge = Gauge::rescaled;
  CHECK(intensity(q) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("pair intensity vanishes linearly at coincidence") {
  CorrelationQuery q;
  q.n = 8;
  q.fugacity = 2.0;
  q.x = {0.0, 1e-6};
  const double near = intensity(q);
  q.x = {0.0, 1e-4};
  CHECK(near / intensity(q) == doctest::Approx(1e-2).epsilon(1e-3));
}

TEST_CASE("repeated arguments are rejected") {
  CorrelationQuery q;
  q.n = 4;
  q.fugacity = 1.0;
  q.x = {0.5, 0.5};
  CHECK_THROWS_AS(intensity(q), std::invalid_argument);
  q.x = {};
  CHECK_THROWS_AS(intensity(q), std::invalid_argument);
}

TEST_CASE("scaled intensities") {
  const double r = 0.5;
  CHECK(scaled_intensity({0.2}, {}, r) == doctest::Approx(2.0 * r * std::atan(1.0 / (2.0 * r))));
  const double far = scaled_intensity({0.0, 40.0}, {}, r);
  const double rho = scaled_intensity({0.0}, {}, r);
  CHECK(far == doctest::Approx(rho * rho).epsilon(1e-2));
  // The CSE residual in IS^{1,1} never reaches an intensity.
  const std::vector<double> z = {0.0, 0.7, 1.9};
  CHECK(intensity({}, z, cse_kernel(true)) == doctest::Approx(intensity({}, z, cse_kernel(false))));
}
