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

#include "twocharge/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace twocharge {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_statistic_lattice(const std::vector<int>& values, int step,
                            const std::function<double(double)>& cdf_of_value) {
  if (values.empty()) throw std::invalid_argument("ks_statistic_lattice: no samples");
  std::vector<int> v(values);
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double f = cdf_of_value(v[i] + 0.5 * step);
    const double below = cdf_of_value(v[i] - 0.5 * step);
    d = std::max({d, std::abs(j / n - f), std::abs(i / n - below)});
    i = j;
  }
  return d;
}

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

UniformityTest uniformity_test(const std::vector<std::vector<std::uint64_t>>& blocks) {
  const std::size_t k = blocks.size();
  if (k < 2) throw std::invalid_argument("uniformity_test needs >= 2 blocks");
  const std::size_t b = blocks.front().size();
  if (b < 2) throw std::invalid_argument("uniformity_test needs >= 2 bins");

  std::vector<double> pooled(b, 0.0);
  std::vector<double> block_total(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (blocks[i].size() != b) throw std::invalid_argument("uniformity_test: ragged blocks");
    for (std::size_t j = 0; j < b; ++j) {
      pooled[j] += static_cast<double>(blocks[i][j]);
      block_total[i] += static_cast<double>(blocks[i][j]);
    }
  }
  double total = 0.0;
  for (double v : pooled) total += v;
  if (total == 0.0) return {0.0, 1.0, 0.0, 1.0};

  const double expected = total / static_cast<double>(b);
  double chi2 = 0.0;
  for (double v : pooled) chi2 += (v - expected) * (v - expected) / expected;

  // Heterogeneity of blocks around the pooled profile.
  double between = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double e = block_total[i] * pooled[j] / total;
      if (e > 0.0) {
        const double dv = static_cast<double>(blocks[i][j]) - e;
        between += dv * dv / e;
      }
    }
  }
  const double d1 = static_cast<double>(b - 1);
  const double d2 = static_cast<double>((k - 1) * (b - 1));
  const double dispersion = between / d2;
  const double f = dispersion > 0.0 ? (chi2 / d1) / dispersion : 0.0;
  const boost::math::fisher_f_distribution<double> dist(d1, d2);
  const double p = f > 0.0 ? boost::math::cdf(boost::math::complement(dist, f)) : 1.0;
  return {chi2, dispersion, f, p};
}

}  // namespace twocharge
