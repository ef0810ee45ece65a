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

#include "twocharge/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace twocharge {

AntisymmetricMatrix::AntisymmetricMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {
  if (dim % 2 != 0) throw std::invalid_argument("Pfaffian needs an even dimension");
}

AntisymmetricMatrix::AntisymmetricMatrix(std::size_t dim, std::span<const Complex> entries)
    : AntisymmetricMatrix(dim) {
  if (entries.size() != dim * dim) throw std::invalid_argument("entry count != dim^2");
  double scale = 0.0;
  for (const Complex& v : entries) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const Complex aij = entries[i * dim + j];
      const Complex aji = entries[j * dim + i];
      if (std::abs(aij + aji) > tol) {
        throw std::invalid_argument("matrix is not antisymmetric");
      }
      const Complex v = 0.5 * (aij - aji);
      a_[i * dim + j] = v;
      a_[j * dim + i] = -v;
    }
  }
}

void AntisymmetricMatrix::set(std::size_t i, std::size_t j, Complex v) {
  if (i == j) throw std::invalid_argument("diagonal of an antisymmetric matrix is zero");
  a_[i * dim_ + j] = v;
  a_[j * dim_ + i] = -v;
}

LogPfaffian log_pfaffian(const AntisymmetricMatrix& matrix) {
  const std::size_t n = matrix.dim();
  std::vector<Complex> a(matrix.data().begin(), matrix.data().end());
  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };

  LogPfaffian out{0.0, Complex(1.0, 0.0)};
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    // Largest entry of row k right of the diagonal becomes the pivot.
    std::size_t p = k + 1;
    double best = std::abs(at(k, k + 1));
    for (std::size_t j = k + 2; j < n; ++j) {
      const double v = std::abs(at(k, j));
      if (v > best) {
        best = v;
        p = j;
      }
    }
    if (best == 0.0) {
      return {-std::numeric_limits<double>::infinity(), Complex(0.0, 0.0)};
    }
    if (p != k + 1) {
      // Simultaneous row/column swap flips the sign of the Pfaffian.
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k + 1, j), at(p, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, p));
      out.phase = -out.phase;
    }
    const Complex pivot = at(k, k + 1);
    out.log_abs += std::log(std::abs(pivot));
    out.phase *= pivot / std::abs(pivot);

    // Eliminate rows/columns k+2.. against the 2x2 pivot block.
    for (std::size_t i = k + 2; i < n; ++i) {
      const Complex tau_i = at(k, i) / pivot;
      const Complex b_i = at(i, k + 1);
      if (tau_i == Complex(0.0) && b_i == Complex(0.0)) continue;  // sparse rows stay untouched
      for (std::size_t j = k + 2; j < n; ++j) {
        const Complex tau_j = at(k, j) / pivot;
        at(i, j) += tau_i * at(j, k + 1) - b_i * tau_j;
      }
    }
  }
  return out;
}

Complex pfaffian(const AntisymmetricMatrix& a) {
  if (a.dim() == 0) return 1.0;
  const LogPfaffian lp = log_pfaffian(a);
  if (lp.phase == Complex(0.0, 0.0)) return 0.0;
  return lp.phase * std::exp(lp.log_abs);
}

}  // namespace twocharge
