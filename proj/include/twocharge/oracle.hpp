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

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "twocharge/ensemble.hpp"

namespace twocharge {

/// Brute-force ground truth for the closed forms. Everything here is
/// computed directly from the Boltzmann weight or from explicit matrices.

enum class OracleMethod { tensor_quadrature, quasi_monte_carlo };

struct OracleSettings {
  OracleMethod method = OracleMethod::quasi_monte_carlo;
  /// Tensor quadrature: Gauss-Legendre points per dimension.
  int points_per_dimension = 64;
  /// Quasi-MC: total lattice points per sector, split across shifts.
  std::uint64_t samples = 10'000'000;
  /// Quasi-MC: independent random shifts used for the standard error.
  int shifts = 32;
  std::uint64_t seed = 1;

  /// Defaults used by the acceptance checks: quadrature for N <= 2,
  /// randomized lattice rules otherwise.
  static OracleSettings defaults_for(int n);
};

struct OracleEstimate {
  double value;
  /// Standard error (quasi-MC) or |I(2p) - I(p)| bound (quadrature).
  double error;
};

/// LU determinant with partial pivoting.
std::complex<double> determinant(std::vector<std::complex<double>> a, std::size_t n);

/// det of the confluent Vandermonde matrix: one column (xi^j) per charge-1
/// particle, two columns (zeta^j, j zeta^{j-1}) per charge-2 particle,
/// rows j = 0..N-1. Logs a warning to std::clog for N > 12.
std::complex<double> vandermonde_det(const Configuration& config);

/// Z_N(X) by summing sector integrals; one particle is pinned at angle 0
/// by rotation invariance. N <= 4.
OracleEstimate oracle_partition(int n, double fugacity, const OracleSettings& settings);

/// Unweighted sector integral int e^{-E} dmu^{L+M} (mu(T) = 2 pi).
OracleEstimate sector_integral(int l, int m, const OracleSettings& settings);

/// Pf(X^2 A_N + B_N) from the closed-form antidiagonal moment entries,
/// returned as a natural log. N even.
double log_moment_matrix_partition(int n, double fugacity);
double moment_matrix_partition(int n, double fugacity);

/// Both sides of |zeta - xi| = -i (zeta - xi) xi^{-1/2} zeta^{-1/2} sgn(zeta - xi)
/// with zeta = e^{i theta}, xi = e^{i psi} and principal roots on [-pi, pi).
struct SgnFactorization {
  double lhs;
  std::complex<double> rhs;
};
SgnFactorization sgn_factorization(double theta, double psi);
bool sgn_factorization_check(double theta, double psi);

/// R_{l,m}(x, z) from the explicit sector densities. Only N = 2.
double oracle_intensity(int n, double fugacity, std::span<const double> x,
                        std::span<const double> z);

}  // namespace twocharge
