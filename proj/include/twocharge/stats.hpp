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

#include <cstdint>
#include <functional>
#include <vector>

namespace twocharge {

double normal_cdf(double z);

/// sup |F_n - F| for a continuous reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// KS distance for an integer variable on a lattice of the given step,
/// comparing the empirical CDF at each support point k against F at the
/// midpoint k + step/2 of the gap to the next lattice point.
double ks_statistic_lattice(const std::vector<int>& values, int step,
                            const std::function<double(double)>& cdf_of_value);

/// Upper tail P(chi^2_dof > x).
double chi_square_sf(double x, double dof);

struct UniformityTest {
  double chi_square;
  /// Between-block dispersion estimate; 1 for independent multinomial counts.
  double dispersion;
  double f_statistic;
  double p_value;
};

/// Tests that pooled bin frequencies are uniform when each block's counts
/// come from autocorrelated draws. The pooled chi-square is divided by the
/// between-block chi-square per degree of freedom, giving an F statistic
/// with (B-1, (K-1)(B-1)) degrees of freedom. Needs K >= 2 blocks.
UniformityTest uniformity_test(const std::vector<std::vector<std::uint64_t>>& blocks);

}  // namespace twocharge
