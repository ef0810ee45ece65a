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

#include "twocharge/oracle.hpp"
#include "twocharge/pfaffian.hpp"
#include "twocharge/rng.hpp"

using namespace twocharge;

namespace {

AntisymmetricMatrix random_matrix(std::size_t dim, Rng& rng) {
  AntisymmetricMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) a.set(i, j, Complex(rng.normal(), rng.normal()));
  }
  return a;
}

}  // namespace

TEST_CASE("small Pfaffians by hand") {
  AntisymmetricMatrix a(2);
  a.set(0, 1, Complex(3.0, -1.0));
  CHECK(std::abs(pfaffian(a) - Complex(3.0, -1.0)) < 1e-15);

  AntisymmetricMatrix b(4);
  const double v[4][4] = {{0, 1, 2, 3}, {0, 0, 4, 5}, {0, 0, 0, 6}, {0, 0, 0, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) b.set(i, j, v[i][j]);
  }
  // a12 a34 - a13 a24 + a14 a23
  CHECK(std::abs(pfaffian(b) - Complex(1 * 6 - 2 * 5 + 3 * 4)) < 1e-13);

  CHECK(std::abs(pfaffian(AntisymmetricMatrix(0)) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(pfaffian(AntisymmetricMatrix(6))) == 0.0);
}

TEST_CASE("pivoting handles a zero leading entry") {
  AntisymmetricMatrix a(4);
  a.set(0, 2, 1.0);
  a.set(1, 3, 1.0);
  // Pf = -a13 a24 = -1
  CHECK(std::abs(pfaffian(a) - Complex(-1.0)) < 1e-15);
}

TEST_CASE("Pf^2 = det on random matrices") {
  Rng rng(3);
  for (std::size_t dim = 2; dim <= 20; dim += 2) {
    const AntisymmetricMatrix a = random_matrix(dim, rng);
    const Complex pf = pfaffian(a);
    const Complex det = determinant(std::vector<Complex>(a.data().begin(), a.data().end()), dim);
    CHECK(std::abs(pf * pf - det) / std::abs(det) < 1e-10);
  }
}

TEST_CASE("log Pfaffian survives overflow") {
  AntisymmetricMatrix a(400);
  for (std::size_t i = 0; i < 400; i += 2) a.set(i, i + 1, 1e300);
  const LogPfaffian lp = log_pfaffian(a);
  CHECK(lp.log_abs == doctest::Approx(200.0 * 300.0 * std::log(10.0)).epsilon(1e-12));
  CHECK(std::abs(lp.phase - Complex(1.0)) < 1e-12);
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(AntisymmetricMatrix(3), std::invalid_argument);
  AntisymmetricMatrix a(2);
  CHECK_THROWS_AS(a.set(1, 1, 1.0), std::invalid_argument);
  const std::vector<Complex> not_skew = {0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(AntisymmetricMatrix(2, not_skew), std::invalid_argument);
  const std::vector<Complex> skew = {0.0, 2.0, -2.0, 0.0};
  CHECK(std::abs(pfaffian(AntisymmetricMatrix(2, skew)) - Complex(2.0)) < 1e-15);
}

TEST_CASE("congruence identity") {
  Rng rng(5);
  for (std::size_t dim : {2u, 4u, 8u}) {
    const AntisymmetricMatrix a = random_matrix(dim, rng);
    std::vector<Complex> q(dim * dim);
    for (Complex& v : q) v = Complex(rng.normal(), rng.normal());
    std::vector<Complex> m(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
          for (std::size_t l = 0; l < dim; ++l) m[i * dim + j] += q[i * dim + k] * a(k, l) * q[j * dim + l];
        }
      }
    }
    const Complex lhs = pfaffian(AntisymmetricMatrix(dim, m));
    const Complex rhs = determinant(q, dim) * pfaffian(a);
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
  }
}
