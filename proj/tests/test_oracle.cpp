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

#include "twocharge/ensemble.hpp"
#include "twocharge/oracle.hpp"
#include "twocharge/pfaffian.hpp"

using namespace twocharge;

TEST_CASE("confluent Vandermonde modulus is the Boltzmann factor") {
  Rng rng(17);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const int m = static_cast<int>(rng.below(n / 2 + 1));
      std::vector<double> xi(n - 2 * m), zeta(m);
      for (double& a : xi) a = kTwoPi * rng.uniform() - kPi;
      for (double& a : zeta) a = kTwoPi * rng.uniform() - kPi;
      const Configuration c(xi, zeta);
      CHECK(std::abs(vandermonde_det(c)) == doctest::Approx(std::exp(-energy(c))).epsilon(1e-8));
    }
  }
}

TEST_CASE("LU determinant") {
  const std::vector<Complex> a = {2.0, 1.0, 1.0, 3.0};
  CHECK(std::abs(determinant(a, 2) - Complex(5.0)) < 1e-14);
  const std::vector<Complex> singular = {1.0, 2.0, 2.0, 4.0};
  CHECK(std::abs(determinant(singular, 2)) < 1e-14);
  CHECK_THROWS_AS(determinant(a, 3), std::invalid_argument);
}

TEST_CASE("moment matrix reproduces the closed form") {
  CHECK(moment_matrix_partition(2, 1.0) == doctest::Approx(10.0 * kPi).epsilon(1e-14));
  for (int n = 2; n <= 200; n += 2) {
    for (double x : {0.5, 1.0, 2.0}) {
      CHECK(log_moment_matrix_partition(n, x) ==
            doctest::Approx(log_partition(EnsembleParams(n, x))).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(log_moment_matrix_partition(3, 1.0), std::domain_error);
}

TEST_CASE("sector integrals") {
  OracleSettings s = OracleSettings::defaults_for(2);
  CHECK(sector_integral(0, 1, s).value == doctest::Approx(kTwoPi));
  CHECK(sector_integral(1, 0, s).value == doctest::Approx(kTwoPi));
  // int int |xi_1 - xi_2| = 2 pi * 8
  CHECK(sector_integral(2, 0, s).value == doctest::Approx(16.0 * kPi).epsilon(1e-12));
  // int int |z_1 - z_2|^4 = 2 pi * 2 pi * 6
  CHECK(sector_integral(0, 2, s).value == doctest::Approx(24.0 * kPi * kPi).epsilon(1e-10));
  CHECK_THROWS_AS(sector_integral(5, 0, s), std::invalid_argument);
}

TEST_CASE("oracle partition at small N") {
  for (double x : {0.5, 1.0, 2.0}) {
    for (int n : {1, 2}) {
      const OracleEstimate e = oracle_partition(n, x, OracleSettings::defaults_for(n));
      CHECK(e.value == doctest::Approx(std::exp(log_partition(EnsembleParams(n, x)))).epsilon(1e-12));
    }
  }
  OracleSettings s = OracleSettings::defaults_for(3);
  s.samples = 400'000;
  const OracleEstimate e = oracle_partition(3, 1.0, s);
  const double exact = std::exp(log_partition(EnsembleParams(3, 1.0)));
  CHECK(e.error > 0.0);
  CHECK(std::abs(e.value - exact) < 4.0 * e.error);
  CHECK(std::abs(e.value - exact) / exact < 5e-3);
  CHECK_THROWS_AS(oracle_partition(5, 1.0, s), std::invalid_argument);
}

TEST_CASE("sgn factorization") {
  const SgnFactorization f = sgn_factorization(1.0, 0.0);
  CHECK(f.lhs == doctest::Approx(2.0 * std::sin(0.5)));
  CHECK(std::abs(f.rhs - Complex(f.lhs)) < 1e-12);
  CHECK(sgn_factorization_check(0.0, kPi - 1e-6));
  CHECK(sgn_factorization_check(kPi - 1e-6, 0.0));
  CHECK(sgn_factorization(0.3, 2.0).lhs == doctest::Approx(sgn_factorization(2.0, 0.3).lhs));
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    CHECK(sgn_factorization_check(10.0 * rng.uniform() - 5.0, 10.0 * rng.uniform() - 5.0));
  }
  CHECK_THROWS_AS(sgn_factorization(1.0, 1.0 + kTwoPi), std::invalid_argument);
}

TEST_CASE("N = 2 oracle intensities") {
  const std::vector<double> none;
  const std::vector<double> one = {0.3};
  CHECK(oracle_intensity(2, 1.0, one, none) == doctest::Approx(4.0 / (5.0 * kPi)));
  CHECK(oracle_intensity(2, 1.0, none, one) == doctest::Approx(1.0 / (10.0 * kPi)));
  const std::vector<double> opposite = {0.0, kPi};
  CHECK(oracle_intensity(2, 1.0, opposite, none) == doctest::Approx(1.0 / (5.0 * kPi)));
  CHECK(oracle_intensity(2, 1.0, one, one) == 0.0);
  CHECK_THROWS_AS(oracle_intensity(4, 1.0, one, none), std::invalid_argument);
}
