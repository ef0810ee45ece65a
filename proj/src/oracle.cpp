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

#include "twocharge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "twocharge/pfaffian.hpp"
#include "twocharge/quadrature.hpp"
#include "twocharge/rng.hpp"

namespace twocharge {

namespace {

using C = std::complex<double>;

double factorial(int k) { return std::tgamma(k + 1.0); }

// e^{-E} with the first particle of the sector pinned at 0 and the rest at
// the free coordinates u (in [0, 2 pi)).
struct PinnedSector {
  int l;
  int m;
  mutable std::vector<double> xi;
  mutable std::vector<double> zeta;

  PinnedSector(int l_, int m_) : l(l_), m(m_), xi(l_), zeta(m_) {}

  int free_dims() const { return l + m - 1; }

  double weight(std::span<const double> u) const {
    std::size_t k = 0;
    if (l > 0) {
      xi[0] = 0.0;
      for (int i = 1; i < l; ++i) xi[i] = u[k++];
      for (int i = 0; i < m; ++i) zeta[i] = u[k++];
    } else {
      zeta[0] = 0.0;
      for (int i = 1; i < m; ++i) zeta[i] = u[k++];
    }
    return std::exp(-energy(xi, zeta));
  }
};

OracleEstimate tensor_sector(const PinnedSector& sector, int points) {
  const int d = sector.free_dims();
  auto integrate = [&](int p) {
    const GaussRule rule = gauss_legendre_unit(static_cast<std::size_t>(p));
    std::vector<int> idx(d, 0);
    std::vector<double> u(d);
    double acc = 0.0;
    while (true) {
      double w = 1.0;
      for (int k = 0; k < d; ++k) {
        u[k] = kTwoPi * rule.nodes[idx[k]];
        w *= kTwoPi * rule.weights[idx[k]];
      }
      acc += w * sector.weight(u);
      int k = 0;
      while (k < d && ++idx[k] == p) idx[k++] = 0;
      if (k == d) break;
    }
    return acc;
  };
  const double coarse = integrate(points);
  const double fine = integrate(2 * points);
  const double err = std::max(std::abs(fine - coarse), 1e-14 * std::abs(fine));
  return {kTwoPi * fine, kTwoPi * err};
}

// Rank-1 Kronecker lattice with the generalized golden ratio generator,
// randomized by independent Cranley-Patterson shifts.
OracleEstimate lattice_sector(const PinnedSector& sector, std::uint64_t samples, int shifts,
                              std::uint64_t seed) {
  const int d = sector.free_dims();
  double g = 2.0;
  for (int it = 0; it < 100; ++it) g = std::pow(1.0 + g, 1.0 / (d + 1));
  std::vector<double> alpha(d);
  for (int k = 0; k < d; ++k) alpha[k] = std::fmod(1.0 / std::pow(g, k + 1), 1.0);

  const std::uint64_t per_shift = std::max<std::uint64_t>(1, samples / shifts);
  Rng rng(seed);
  std::vector<double> means;
  std::vector<double> u(d);
  std::vector<double> shift(d);
  for (int s = 0; s < shifts; ++s) {
    for (double& v : shift) v = rng.uniform();
    CompensatedSum acc;
    for (std::uint64_t i = 0; i < per_shift; ++i) {
      for (int k = 0; k < d; ++k) {
        double frac = shift[k] + static_cast<double>(i + 1) * alpha[k];
        frac -= std::floor(frac);
        u[k] = kTwoPi * frac;
      }
      acc.add(sector.weight(u));
    }
    means.push_back(acc.value() / static_cast<double>(per_shift));
  }
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= shifts;
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= (shifts - 1);
  const double volume = kTwoPi * std::pow(kTwoPi, d);
  return {volume * mean, volume * std::sqrt(var / shifts)};
}

}  // namespace

OracleSettings OracleSettings::defaults_for(int n) {
  OracleSettings s;
  if (n <= 2) s.method = OracleMethod::tensor_quadrature;
  return s;
}

C determinant(std::vector<C> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("determinant: size mismatch");
  C det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    }
    if (a[p * n + k] == C(0.0)) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      det = -det;
    }
    const C pivot = a[k * n + k];
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const C f = a[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

C vandermonde_det(const Configuration& config) {
  const std::size_t n = static_cast<std::size_t>(config.total_charge());
  if (n > 12) {
    std::clog << "warning: confluent Vandermonde with N = " << n << " is ill-conditioned\n";
  }
  std::vector<C> v(n * n);
  std::size_t col = 0;
  auto put_column = [&](auto&& value_at_row) {
    for (std::size_t j = 0; j < n; ++j) v[j * n + col] = value_at_row(j);
    ++col;
  };
  for (double a : config.xi()) {
    const C w = std::polar(1.0, a);
    put_column([&](std::size_t j) { return std::pow(w, static_cast<int>(j)); });
  }
  for (double a : config.zeta()) {
    const C w = std::polar(1.0, a);
    put_column([&](std::size_t j) { return std::pow(w, static_cast<int>(j)); });
    put_column([&](std::size_t j) {
      return j == 0 ? C(0.0) : static_cast<double>(j) * std::pow(w, static_cast<int>(j) - 1);
    });
  }
  return determinant(std::move(v), n);
}

OracleEstimate sector_integral(int l, int m, const OracleSettings& settings) {
  if (l < 0 || m < 0 || l + m == 0) throw std::invalid_argument("empty sector");
  if (l + m > 4) throw std::invalid_argument("sector too large for brute force");
  const PinnedSector sector(l, m);
  if (sector.free_dims() == 0) return {kTwoPi, 0.0};
  if (settings.method == OracleMethod::tensor_quadrature) {
    if (settings.points_per_dimension < 16) {
      throw std::invalid_argument("need >= 16 points per dimension");
    }
    return tensor_sector(sector, settings.points_per_dimension);
  }
  if (settings.shifts < 2) throw std::invalid_argument("need >= 2 lattice shifts");
  const std::uint64_t seed = splitmix64(settings.seed ^ (static_cast<std::uint64_t>(l) << 32 | m));
  return lattice_sector(sector, settings.samples, settings.shifts, seed);
}

OracleEstimate oracle_partition(int n, double fugacity, const OracleSettings& settings) {
  if (n < 1 || n > 4) throw std::invalid_argument("oracle_partition supports 1 <= N <= 4");
  if (!(fugacity >= 0.0)) throw std::invalid_argument("fugacity must be >= 0");
  double value = 0.0;
  double var = 0.0;
  for (int m = 0; 2 * m <= n; ++m) {
    const int l = n - 2 * m;
    if (l > 0 && fugacity == 0.0) continue;
    const double coef = std::pow(fugacity, l) / (factorial(l) * factorial(m));
    const OracleEstimate s = sector_integral(l, m, settings);
    value += coef * s.value;
    var += coef * coef * s.error * s.error;
  }
  // Exact sectors report zero error; keep a rounding floor.
  return {value, std::max(std::sqrt(var), 1e-14 * std::abs(value))};
}

double log_moment_matrix_partition(int n, double fugacity) {
  if (n < 2 || n % 2 != 0) throw std::domain_error("moment-matrix Pfaffian needs even N");
  // Only the antidiagonal m + n' = N + 1 survives; entries indexed by the
  // row m (1-based): X^2 8 pi / k + 2 pi k with k = N - 2m + 1.
  AntisymmetricMatrix a(static_cast<std::size_t>(n));
  const double x2 = fugacity * fugacity;
  for (int m = 1; m <= n / 2; ++m) {
    const double k = n - 2 * m + 1;
    a.set(m - 1, n - m, x2 * 8.0 * kPi / k + kTwoPi * k);
  }
  const LogPfaffian lp = log_pfaffian(a);
  if (!(lp.phase.real() > 0.0) || std::abs(lp.phase.imag()) > 1e-12) {
    throw std::runtime_error("moment-matrix Pfaffian is not positive");
  }
  return lp.log_abs;
}

double moment_matrix_partition(int n, double fugacity) {
  return std::exp(log_moment_matrix_partition(n, fugacity));
}

SgnFactorization sgn_factorization(double theta, double psi) {
  const double arg_zeta = normalize_angle(theta);
  const double arg_xi = normalize_angle(psi);
  if (arg_zeta == arg_xi) throw std::invalid_argument("sgn factorization needs theta != psi");
  const C zeta = std::polar(1.0, arg_zeta);
  const C xi = std::polar(1.0, arg_xi);
  const C inv_sqrt_xi = std::polar(1.0, -0.5 * arg_xi);
  const C inv_sqrt_zeta = std::polar(1.0, -0.5 * arg_zeta);
  const double sgn = arg_zeta > arg_xi ? 1.0 : -1.0;
  return {std::abs(zeta - xi), C(0.0, -1.0) * (zeta - xi) * inv_sqrt_xi * inv_sqrt_zeta * sgn};
}

bool sgn_factorization_check(double theta, double psi) {
  const SgnFactorization f = sgn_factorization(theta, psi);
  return std::abs(f.rhs - f.lhs) <= 1e-12;
}

double oracle_intensity(int n, double fugacity, std::span<const double> x,
                        std::span<const double> z) {
  if (n != 2) throw std::invalid_argument("oracle_intensity is only available at N = 2");
  if (x.empty() && z.empty()) throw std::invalid_argument("need at least one argument");
  const double x2 = fugacity * fugacity;
  // Sector (L, M) = (2, 0): (X^2 / 2!) int int |xi_1 - xi_2| = X^2 / 2 * 2 pi * 8.
  // Sector (0, 1): int dmu = 2 pi.
  const double z2 = 8.0 * kPi * x2 + kTwoPi;
  if (x.size() == 1 && z.empty()) return 8.0 * x2 / z2;
  if (x.empty() && z.size() == 1) return 1.0 / z2;
  if (x.size() == 2 && z.empty()) {
    return x2 * std::abs(std::polar(1.0, x[0]) - std::polar(1.0, x[1])) / z2;
  }
  return 0.0;
}

}  // namespace twocharge
