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

#include "twocharge/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "twocharge/ensemble.hpp"

namespace twocharge {

namespace {

void require_distinct(std::vector<double> v, const char* what) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw std::invalid_argument(std::string("repeated ") + what + " argument");
  }
}

}  // namespace

AntisymmetricMatrix assemble(const std::vector<double>& x, const std::vector<double>& z,
                             const MatrixKernel& kernel) {
  if (x.empty() && z.empty()) throw std::invalid_argument("need at least one argument");
  require_distinct(x, "charge-1");
  require_distinct(z, "charge-2");

  struct Point {
    Species species;
    double angle;
  };
  std::vector<Point> pts;
  pts.reserve(x.size() + z.size());
  for (double a : x) pts.push_back({Species::one, a});
  for (double a : z) pts.push_back({Species::two, a});

  AntisymmetricMatrix out(2 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      const MatrixKernelValue k = kernel(pts[i].species, pts[j].species, pts[i].angle, pts[j].angle);
      if (i == j) {
        // DS and IS vanish at coincidence; only S survives on the diagonal.
        out.set(2 * i, 2 * i + 1, k.m[0][1]);
        continue;
      }
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) out.set(2 * i + a, 2 * j + b, k.m[a][b]);
      }
    }
  }
  return out;
}

AntisymmetricMatrix assemble(const CorrelationQuery& q) {
  std::vector<double> x(q.x), z(q.z);
  for (double& a : x) a = normalize_angle(a);
  for (double& a : z) a = normalize_angle(a);
  return assemble(x, z, finite_kernel(q.n, q.fugacity, q.gauge, q.r));
}

namespace {

double real_pfaffian(const AntisymmetricMatrix& m) {
  const Complex pf = pfaffian(m);
  if (std::abs(pf.imag()) > 1e-10 * (1.0 + std::abs(pf.real()))) {
    throw std::runtime_error("intensity Pfaffian has a non-negligible imaginary part");
  }
  return pf.real();
}

}  // namespace

double intensity(const CorrelationQuery& q) { return real_pfaffian(assemble(q)); }

double intensity(const std::vector<double>& x, const std::vector<double>& z,
                 const MatrixKernel& kernel) {
  return real_pfaffian(assemble(x, z, kernel));
}

double scaled_intensity(const std::vector<double>& x, const std::vector<double>& z, double r) {
  return intensity(x, z, scaled_kernel(r));
}

}  // namespace twocharge
