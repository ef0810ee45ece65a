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
#include <cstddef>
#include <span>
#include <vector>

namespace twocharge {

using Complex = std::complex<double>;

/// Even-dimensional complex skew-symmetric matrix, row-major.
class AntisymmetricMatrix {
 public:
  /// Zero matrix of the given (even) dimension.
  explicit AntisymmetricMatrix(std::size_t dim);

  /// Accepts `entries` (dim x dim, row-major) when A + A^T vanishes to
  /// 1e-12 relative to the largest entry, then stores (A - A^T) / 2.
  AntisymmetricMatrix(std::size_t dim, std::span<const Complex> entries);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  /// Sets A(i, j) = v and A(j, i) = -v. Requires i != j.
  void set(std::size_t i, std::size_t j, Complex v);

  std::span<const Complex> data() const { return a_; }

 private:
  std::size_t dim_;
  std::vector<Complex> a_;
};

/// Pf(A) = phase * exp(log_abs); phase has unit modulus, or is 0 when
/// the Pfaffian vanishes (log_abs is then -inf).
struct LogPfaffian {
  double log_abs;
  Complex phase;
};

/// Parlett-Reid skew elimination with partial pivoting.
LogPfaffian log_pfaffian(const AntisymmetricMatrix& a);
Complex pfaffian(const AntisymmetricMatrix& a);

}  // namespace twocharge
