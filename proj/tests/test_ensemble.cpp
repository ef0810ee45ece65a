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

using namespace twocharge;

namespace {

// Closed form as a plain product, without the log-space bookkeeping.
double direct_partition(int n, double x) {
  double z = std::pow(kTwoPi, (n + 1) / 2);
  if (n % 2 == 1) z *= x;
  for (int j = 1; j <= n / 2; ++j) {
    const double k = n - 2 * j + 1;
    z *= (4.0 * x * x + k * k) / k;
  }
  return z;
}

}  // namespace

TEST_CASE("log_partition examples") {
  CHECK(log_partition(EnsembleParams(2, 1.0)) == doctest::Approx(std::log(10.0 * kPi)).epsilon(1e-14));
  CHECK(log_partition(EnsembleParams(1, 1.0)) == doctest::Approx(std::log(kTwoPi)).epsilon(1e-14));
  CHECK(log_partition(EnsembleParams(4, 0.0)) ==
        doctest::Approx(std::log(kTwoPi * kTwoPi * 3.0)).epsilon(1e-14));
  CHECK(log_partition(EnsembleParams(3, 1.0)) ==
        doctest::Approx(std::log(16.0 * kPi * kPi)).epsilon(1e-14));
  CHECK(std::isinf(log_partition(EnsembleParams(3, 0.0))));
  CHECK(log_partition(EnsembleParams(3, 0.0)) < 0.0);
}

TEST_CASE("log_partition matches the direct product for N <= 40") {
  for (int n = 1; n <= 40; ++n) {
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
      if (n % 2 == 1 && x == 0.0) continue;
      const double z = std::exp(log_partition(EnsembleParams(n, x)));
      CHECK(z == doctest::Approx(direct_partition(n, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log_partition stays finite at large N") {
  const double lz = log_partition(EnsembleParams::from_ratio(2000, 0.5));
  CHECK(std::isfinite(lz));
  CHECK(lz > 700.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(EnsembleParams(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(EnsembleParams(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(EnsembleParams(2, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(Configuration({0.1, 0.1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration({kPi}, {-kPi}), std::invalid_argument);
}

TEST_CASE("angles normalize onto [-pi, pi)") {
  CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(normalize_angle(-kPi) == doctest::Approx(-kPi));
  const Configuration c({7.0}, {-4.0});
  CHECK(c.xi()[0] == doctest::Approx(7.0 - kTwoPi));
  CHECK(c.zeta()[0] == doctest::Approx(-4.0 + kTwoPi));
}

TEST_CASE("energy examples") {
  CHECK(energy(Configuration({}, {1.0})) == 0.0);
  CHECK(energy(Configuration({0.0, kPi}, {})) == doctest::Approx(-std::log(2.0)));
  CHECK(energy(Configuration({0.0}, {kPi})) == doctest::Approx(-2.0 * std::log(2.0)));
  CHECK(energy(Configuration({}, {0.0, kPi})) == doctest::Approx(-4.0 * std::log(2.0)));
}

TEST_CASE("energy is rotation and permutation invariant") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xi(3), zeta(2);
    for (double& a : xi) a = kTwoPi * rng.uniform();
    for (double& a : zeta) a = kTwoPi * rng.uniform();
    const double e = energy(Configuration(xi, zeta));
    std::vector<double> xr(xi), zr(zeta);
    for (double& a : xr) a += 1.234;
    for (double& a : zr) a += 1.234;
    CHECK(energy(Configuration(xr, zr)) == doctest::Approx(e).epsilon(1e-10));
    std::swap(xi[0], xi[2]);
    std::swap(zeta[0], zeta[1]);
    CHECK(energy(xi, zeta) == doctest::Approx(e).epsilon(1e-15));
  }
}

TEST_CASE("boltzmann weight examples") {
  CHECK(boltzmann_weight(Configuration({}, {0.3}), 5.0) == doctest::Approx(1.0));
  CHECK(boltzmann_weight(Configuration({0.0, kPi}, {}), 1.0) == doctest::Approx(1.0));
  CHECK(boltzmann_weight(Configuration({0.0, kPi}, {}), 0.0) == 0.0);
}

TEST_CASE("count_pgf examples") {
  CHECK(count_pgf(EnsembleParams(7, 0.8), 1.0) == doctest::Approx(1.0));
  CHECK(count_pgf(EnsembleParams(2, 1.0), 0.0) == doctest::Approx(0.2));
  CHECK(count_pgf(EnsembleParams(4000, 1.0), 0.5) ==
        doctest::Approx(limiting_pgf(1.0, 0.5, Parity::even)).epsilon(1e-3));
  CHECK_THROWS(count_pgf(EnsembleParams(3, 0.0), 0.5));
}

TEST_CASE("count_pgf equals the Bernoulli product") {
  for (int n = 1; n <= 200; n += 7) {
    for (double x : {0.5, 1.0, 2.0}) {
      const EnsembleParams p(n, x);
      const CountDistribution d = count_distribution(p);
      for (double t : {0.0, 0.3, 1.7}) {
        double prod = d.parity() ? t : 1.0;
        for (double q : d.q()) prod *= (1.0 - q) + q * t * t;
        CHECK(count_pgf(p, t) == doctest::Approx(prod).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("limiting pgf for odd N and large arguments") {
  CHECK(limiting_pgf(1.0, 0.5, Parity::odd) ==
        doctest::Approx(std::sinh(kPi * 0.5) / std::sinh(kPi)));
  // cosh(400 pi T) / cosh(400 pi) stays finite for |T| <= 1.
  CHECK(limiting_pgf(400.0, 0.999, Parity::even) == doctest::Approx(std::exp(-0.4 * kPi)).epsilon(1e-12));
}

TEST_CASE("count distribution moments") {
  const CountDistribution d = count_distribution(EnsembleParams(2, 1.0));
  CHECK(d.q().size() == 1);
  CHECK(d.q()[0] == doctest::Approx(0.8));
  CHECK(d.mean() == doctest::Approx(1.6));
  CHECK(d.variance() == doctest::Approx(4.0 * 0.8 * 0.2));

  const CountDistribution big = count_distribution(EnsembleParams(31, 3.0));
  const std::vector<double> pmf = big.pmf();
  double total = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    const double l = 1.0 + 2.0 * j;
    total += pmf[j];
    mean += l * pmf[j];
    second += l * l * pmf[j];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mean == doctest::Approx(big.mean()).epsilon(1e-12));
  CHECK(second - mean * mean == doctest::Approx(big.variance()).epsilon(1e-10));

  CHECK_THROWS_AS(count_distribution(EnsembleParams(5, 0.0)), std::invalid_argument);
}

TEST_CASE("mean count equals the even-N summand form") {
  for (int n = 2; n <= 200; n += 2) {
    const double x = 1.3;
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double k = 2.0 * j - 1.0;
      s += 8.0 * x * x / (4.0 * x * x + k * k);
    }
    CHECK(mean_count(EnsembleParams(n, x)) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("limiting fractions") {
  CHECK(limiting_mean_fraction(0.5) == doctest::Approx(kPi / 4.0));
  CHECK(limiting_var_fraction(0.5) == doctest::Approx(kPi / 4.0 - 0.5));
}

TEST_CASE("midpoint-sum convergence is second order") {
  const double r = 0.5;
  auto err = [&](int n) {
    return std::abs(mean_count(EnsembleParams::from_ratio(n, r)) / n - limiting_mean_fraction(r));
  };
  const double ratio = err(200) / err(400);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("clt normalization") {
  const CltScale c = clt_scale(1000, 0.5);
  CHECK(c.mu == doctest::Approx(250.0 * kPi));
  CHECK(c.sigma * c.sigma == doctest::Approx(1000.0 * (kPi / 4.0 - 0.5)));
  CHECK(clt_standardize(786, 1000, 0.5) == doctest::Approx((786 - 250.0 * kPi) / c.sigma));
}

TEST_CASE("exact count sampler") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) CHECK(sample_count_exact(EnsembleParams(6, 0.0), rng) == 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_count_exact(EnsembleParams(7, 1.5), rng) % 2 == 1);

  const int draws = 200'000;
  int twos = 0;
  for (int i = 0; i < draws; ++i) twos += sample_count_exact(EnsembleParams(2, 1.0), rng) == 2;
  const double p = static_cast<double>(twos) / draws;
  const double se = std::sqrt(0.8 * 0.2 / draws);
  CHECK(std::abs(p - 0.8) < 3.0 * se);
}
