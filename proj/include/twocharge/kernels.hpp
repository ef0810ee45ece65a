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

#include <array>
#include <complex>
#include <functional>

namespace twocharge {

using Complex = std::complex<double>;

enum class Species { one = 1, two = 2 };

/// S is the scalar kernel, DS its derivative companion, IS the integrated one.
enum class Entry { S, DS, IS };

/// raw: entries as they come out of the skew-orthogonal construction.
/// rescaled: conjugated by the determinant-one diagonal matrix that makes
/// every entry O(N) at X = N r. Both gauges give identical Pfaffians.
enum class Gauge { raw, rescaled };

/// One entry of the finite-N matrix kernel K_N^{s,t}(X; theta, psi).
struct KernelQuery {
  Species s = Species::one;
  Species t = Species::one;
  Entry kind = Entry::S;
  Gauge gauge = Gauge::raw;
  int n = 2;
  double fugacity = 0.0;
  /// Only read in the rescaled gauge; r <= 0 means r = X / N.
  double r = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

/// One entry of the N -> infinity kernel at X = N r, in coordinates where
/// the mean spacing of charge is one.
struct ScaledKernelQuery {
  Species s = Species::one;
  Species t = Species::one;
  Entry kind = Entry::S;
  double r = 1.0;
  double theta = 0.0;
  double psi = 0.0;
};

/// 2x2 kernel block laid out as [[DS^{s,t}, S^{s,t}], [-S^{t,s}(psi, theta), IS^{s,t}]].
struct MatrixKernelValue {
  std::array<std::array<Complex, 2>, 2> m{};

  Complex ds() const { return m[0][0]; }
  Complex s() const { return m[0][1]; }
  Complex is() const { return m[1][1]; }
};

/// Finite-N entry in the raw gauge. N must be even.
Complex finite_entry(Species s, Species t, Entry kind, int n, double fugacity, double theta,
                     double psi);

/// Finite-N entry after the diagonal congruence with ratio r (X > 0).
Complex rescaled_entry(Species s, Species t, Entry kind, int n, double fugacity, double r,
                       double theta, double psi);

/// Dispatches on q.gauge.
Complex finite_entry(const KernelQuery& q);

/// Scaling-limit entry, evaluated by Gauss-Legendre quadrature on [0, 1].
Complex scaled_entry(Species s, Species t, Entry kind, double r, double theta, double psi);
Complex scaled_entry(const ScaledKernelQuery& q);

/// r -> infinity closed forms (COE); delta = theta - psi.
Complex coe_limit_entry(Species s, Species t, Entry kind, double delta);

/// r -> 0+ closed forms (CSE); delta = theta - psi.
Complex cse_limit_entry(Species s, Species t, Entry kind, double delta);

/// int_0^1 sin(x t) / t dt.
double sine_integral(double x);

/// (sin x / x^2 - cos x / x), continued to 0 at x = 0.
double sinc_derivative_form(double x);

/// Kernel block as a function of species pair and the two angles.
using MatrixKernel = std::function<MatrixKernelValue(Species, Species, double, double)>;

MatrixKernel finite_kernel(int n, double fugacity, Gauge gauge = Gauge::raw, double r = 0.0);
MatrixKernel scaled_kernel(double r);
MatrixKernel coe_kernel();
/// keep_is11_residual = false drops the 2 pi sgn term left in IS^{1,1};
/// used to check that no intensity can see it.
MatrixKernel cse_kernel(bool keep_is11_residual = true);

}  // namespace twocharge
