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

#include "twocharge/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "twocharge/ensemble.hpp"
#include "twocharge/quadrature.hpp"

namespace twocharge {

namespace {

constexpr Complex kI{0.0, 1.0};

// Building blocks of every finite-N entry: sums over n = 1..N/2 with
// k = 2n - 1, D = 4X^2 + k^2 and half-integer frequencies (n - 1/2) delta.
struct FiniteSums {
  double cos0 = 0.0;   // sum cos / D
  double cos2 = 0.0;   // sum k^2 cos / D
  double sin1 = 0.0;   // sum k sin / D
  double sin3 = 0.0;   // sum k^3 sin / D
  double sinm1 = 0.0;  // sum sin / (k D)
};

FiniteSums finite_sums(int n, double fugacity, double delta) {
  const double four_x2 = 4.0 * fugacity * fugacity;
  CompensatedSum c0, c2, s1, s3, sm1;
  for (int j = 1; j <= n / 2; ++j) {
    const double k = 2.0 * j - 1.0;
    const double d = four_x2 + k * k;
    const double phase = 0.5 * k * delta;
    const double c = std::cos(phase) / d;
    const double s = std::sin(phase) / d;
    c0.add(c);
    c2.add(k * k * c);
    s1.add(k * s);
    s3.add(k * k * k * s);
    sm1.add(s / k);
  }
  return {c0.value(), c2.value(), s1.value(), s3.value(), sm1.value()};
}

void require_even(int n) {
  if (n < 2 || n % 2 != 0) {
    throw std::domain_error("odd-N kernels unsupported (N must be even and >= 2)");
  }
}

// Entries for which the transposition rule K^{2,1}(a, b) = -K^{1,2}(b, a)^T
// is needed: DS^{2,1} and IS^{2,1}.
bool via_transpose(Species s, Species t, Entry kind) {
  return s == Species::two && t == Species::one && kind != Entry::S;
}

// Integrals over t in [0, 1] with weight 1 / (4r^2 + t^2).
struct ScaledIntegrals {
  double cos0 = 0.0;   // cos(pi d t) / w
  double cos2 = 0.0;   // t^2 cos / w
  double sin1 = 0.0;   // t sin / w
  double sin3 = 0.0;   // t^3 sin / w
  double sinm1 = 0.0;  // sin / (t w)
};

// Panel edges: geometric grading toward t = 0 when the Lorentzian width 2r
// is small, then equal splits so that no panel sees more than ~20 radians
// of oscillation.
std::vector<double> panel_edges(double r, double delta) {
  std::vector<double> coarse{0.0};
  for (double b = 2.0 * r; b < 0.5; b *= 4.0) coarse.push_back(b);
  coarse.push_back(1.0);
  std::vector<double> edges{0.0};
  const double omega = kPi * std::abs(delta);
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    const double a = coarse[i - 1];
    const double b = coarse[i];
    const int pieces = 1 + static_cast<int>(omega * (b - a) / 20.0);
    for (int p = 1; p <= pieces; ++p) edges.push_back(a + (b - a) * p / pieces);
  }
  return edges;
}

ScaledIntegrals scaled_integrals(double r, double delta) {
  const GaussRule& rule = gauss64();
  const double four_r2 = 4.0 * r * r;
  const double omega = kPi * delta;
  const std::vector<double> edges = panel_edges(r, delta);
  ScaledIntegrals out;
  for (std::size_t p = 1; p < edges.size(); ++p) {
    const double a = edges[p - 1];
    const double h = edges[p] - a;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = a + h * rule.nodes[i];
      const double w = h * rule.weights[i] / (four_r2 + t * t);
      const double c = std::cos(omega * t);
      const double s = std::sin(omega * t);
      out.cos0 += w * c;
      out.cos2 += w * t * t * c;
      out.sin1 += w * t * s;
      out.sin3 += w * t * t * t * s;
      out.sinm1 += w * (t < 1e-8 ? omega : s / t);
    }
  }
  return out;
}

MatrixKernelValue assemble_block(Species s, Species t, double theta, double psi,
                                 const std::function<Complex(Species, Species, Entry, double,
                                                             double)>& entry) {
  MatrixKernelValue v;
  v.m[0][0] = entry(s, t, Entry::DS, theta, psi);
  v.m[0][1] = entry(s, t, Entry::S, theta, psi);
  v.m[1][0] = -entry(t, s, Entry::S, psi, theta);
  v.m[1][1] = entry(s, t, Entry::IS, theta, psi);
  return v;
}

}  // namespace

Complex finite_entry(Species s, Species t, Entry kind, int n, double fugacity, double theta,
                     double psi) {
  require_even(n);
  if (!(fugacity >= 0.0)) throw std::invalid_argument("fugacity must be >= 0");
  if (via_transpose(s, t, kind)) return -finite_entry(t, s, kind, n, fugacity, psi, theta);
  theta = normalize_angle(theta);
  psi = normalize_angle(psi);
  const FiniteSums f = finite_sums(n, fugacity, theta - psi);
  const double x = fugacity;
  const double pi = kPi;
  if (s == Species::one && t == Species::one) {
    switch (kind) {
      case Entry::S: return 4.0 * x * x / pi * f.cos0;
      case Entry::DS: return kI * (x * x / pi) * f.sin1;
      case Entry::IS: return -kI * (16.0 * x * x / pi * f.sinm1 + sign(psi - theta));
    }
  }
  if (s == Species::two && t == Species::two) {
    switch (kind) {
      case Entry::S: return f.cos2 / (2.0 * pi);
      case Entry::DS: return kI * f.sin1 / pi;
      case Entry::IS: return -kI * f.sin3 / (4.0 * pi);
    }
  }
  if (s == Species::one) {
    switch (kind) {
      case Entry::S: return x / (2.0 * pi) * f.cos2;
      case Entry::DS: return kI * (x / pi) * f.sin1;
      case Entry::IS: return -2.0 * kI * (x / pi) * f.sin1;
    }
  }
  // S^{2,1}
  return 4.0 * x / pi * f.cos0;
}

Complex rescaled_entry(Species s, Species t, Entry kind, int n, double fugacity, double r,
                       double theta, double psi) {
  if (!(fugacity > 0.0)) throw std::invalid_argument("rescaled gauge needs X > 0");
  if (!(r > 0.0)) throw std::invalid_argument("rescaled gauge needs r > 0");
  const Complex raw = finite_entry(s, t, kind, n, fugacity, theta, psi);
  // Conjugation by diag(sqrt(r/X), sqrt(X/r)) on charge-1 slots and
  // diag(sqrt(X/r), sqrt(r/X)) on charge-2 slots.
  const double up = fugacity / r;
  const double down = r / fugacity;
  if (s == t) {
    if (kind == Entry::S) return raw;
    const bool one = s == Species::one;
    if (kind == Entry::DS) return raw * (one ? down : up);
    return raw * (one ? up : down);
  }
  if (kind != Entry::S) return raw;
  return raw * (s == Species::one ? down : up);
}

Complex finite_entry(const KernelQuery& q) {
  if (q.gauge == Gauge::raw) return finite_entry(q.s, q.t, q.kind, q.n, q.fugacity, q.theta, q.psi);
  const double r = q.r > 0.0 ? q.r : q.fugacity / q.n;
  return rescaled_entry(q.s, q.t, q.kind, q.n, q.fugacity, r, q.theta, q.psi);
}

Complex scaled_entry(Species s, Species t, Entry kind, double r, double theta, double psi) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be > 0");
  if (via_transpose(s, t, kind)) return -scaled_entry(t, s, kind, r, psi, theta);
  const ScaledIntegrals g = scaled_integrals(r, theta - psi);
  const double r2 = r * r;
  const Complex ds11 = kI * r2 * g.sin1;
  if (s == Species::one && t == Species::one) {
    switch (kind) {
      case Entry::S: return 4.0 * r2 * g.cos0;
      case Entry::DS: return ds11;
      case Entry::IS: return -kI * (16.0 * r2 * g.sinm1 + kTwoPi * sign(psi - theta));
    }
  }
  if (s == Species::two && t == Species::two) {
    switch (kind) {
      case Entry::S: return 0.5 * g.cos2;
      case Entry::DS: return kI * g.sin1;
      case Entry::IS: return -0.25 * kI * g.sin3;
    }
  }
  if (s == Species::one) {
    switch (kind) {
      case Entry::S: return 0.5 * r * g.cos2;
      case Entry::DS: return ds11 / r;
      case Entry::IS: return -2.0 * ds11 / r;
    }
  }
  return 4.0 * r * g.cos0;
}

Complex scaled_entry(const ScaledKernelQuery& q) {
  return scaled_entry(q.s, q.t, q.kind, q.r, q.theta, q.psi);
}

double sine_integral(double x) {
  const GaussRule& rule = gauss64();
  const int pieces = 1 + static_cast<int>(std::abs(x) / 20.0);
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double a = static_cast<double>(p) / pieces;
    const double h = 1.0 / pieces;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = a + h * rule.nodes[i];
      acc += h * rule.weights[i] * std::sin(x * t) / t;
    }
  }
  return acc;
}

double sinc_derivative_form(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
  }
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

namespace {

double sinc_pi(double delta) {
  const double x = kPi * delta;
  return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

}  // namespace

Complex coe_limit_entry(Species s, Species t, Entry kind, double delta) {
  if (s != Species::one || t != Species::one) return 0.0;
  const double x = kPi * delta;
  switch (kind) {
    case Entry::S: return sinc_pi(delta);
    case Entry::DS: return 0.25 * kI * sinc_derivative_form(x);
    case Entry::IS: return -kI * (4.0 * sine_integral(x) + kTwoPi * sign(-delta));
  }
  return 0.0;
}

Complex cse_limit_entry(Species s, Species t, Entry kind, double delta) {
  const double x = kPi * delta;
  if (s == Species::two && t == Species::two) {
    switch (kind) {
      case Entry::S: return 0.5 * sinc_pi(delta);
      case Entry::DS: return kI * sine_integral(x);
      case Entry::IS: return -0.25 * kI * sinc_derivative_form(x);
    }
  }
  if (s == Species::one && t == Species::one && kind == Entry::IS) {
    return -kI * kTwoPi * static_cast<double>(sign(-delta));
  }
  // S^{2,1} = S^{1,1} / r tends to pi, not 0.
  if (s == Species::two && t == Species::one && kind == Entry::S) return kPi;
  return 0.0;
}

MatrixKernel finite_kernel(int n, double fugacity, Gauge gauge, double r) {
  require_even(n);
  if (gauge == Gauge::raw) {
    return [=](Species s, Species t, double theta, double psi) {
      return assemble_block(s, t, theta, psi, [&](Species a, Species b, Entry k, double u,
                                                   double v) {
        return finite_entry(a, b, k, n, fugacity, u, v);
      });
    };
  }
  const double ratio = r > 0.0 ? r : fugacity / n;
  return [=](Species s, Species t, double theta, double psi) {
    return assemble_block(s, t, theta, psi, [&](Species a, Species b, Entry k, double u,
                                                 double v) {
      return rescaled_entry(a, b, k, n, fugacity, ratio, u, v);
    });
  };
}

MatrixKernel scaled_kernel(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be > 0");
  return [=](Species s, Species t, double theta, double psi) {
    return assemble_block(s, t, theta, psi,
                          [&](Species a, Species b, Entry k, double u, double v) {
                            return scaled_entry(a, b, k, r, u, v);
                          });
  };
}

MatrixKernel coe_kernel() {
  return [](Species s, Species t, double theta, double psi) {
    return assemble_block(s, t, theta, psi,
                          [](Species a, Species b, Entry k, double u, double v) {
                            return coe_limit_entry(a, b, k, u - v);
                          });
  };
}

MatrixKernel cse_kernel(bool keep_is11_residual) {
  return [=](Species s, Species t, double theta, double psi) {
    return assemble_block(s, t, theta, psi, [&](Species a, Species b, Entry k, double u,
                                                 double v) {
      if (!keep_is11_residual && a == Species::one && b == Species::one && k == Entry::IS) {
        return Complex(0.0);
      }
      return cse_limit_entry(a, b, k, u - v);
    });
  };
}

}  // namespace twocharge
