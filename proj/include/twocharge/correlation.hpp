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

#include <vector>

#include "twocharge/kernels.hpp"
#include "twocharge/pfaffian.hpp"

namespace twocharge {

/// Arguments of the (l, m)-intensity R_{l,m}(x, z): l charge-1 angles and
/// m charge-2 angles for the finite ensemble with total charge N.
struct CorrelationQuery {
  std::vector<double> x;
  std::vector<double> z;
  int n = 2;
  double fugacity = 0.0;
  Gauge gauge = Gauge::raw;
  /// Rescaled gauge only; r <= 0 means r = X / N.
  double r = 0.0;
};

/// Block matrix [[K^{1,1}(x_i, x_j)], [K^{1,2}(x_i, z_n)]; [K^{2,1}(z_k, x_j)], [K^{2,2}(z_k, z_n)]]
/// of dimension 2(l + m). Angles within one species must be distinct.
AntisymmetricMatrix assemble(const std::vector<double>& x, const std::vector<double>& z,
                             const MatrixKernel& kernel);
AntisymmetricMatrix assemble(const CorrelationQuery& q);

/// Pf(assemble(q)). Throws if the Pfaffian carries an imaginary part
/// above 1e-10 (1 + |Re|).
double intensity(const CorrelationQuery& q);

/// Real part of the Pfaffian for an arbitrary matrix kernel, with the same
/// imaginary-residue check.
double intensity(const std::vector<double>& x, const std::vector<double>& z,
                 const MatrixKernel& kernel);

/// Scaling-limit intensity; angles are in units of the mean charge spacing.
double scaled_intensity(const std::vector<double>& x, const std::vector<double>& z, double r);

}  // namespace twocharge
