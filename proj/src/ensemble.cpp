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

#include "twocharge/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace twocharge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_count_law_defined(const EnsembleParams& params) {
  if (params.parity() == 1 && params.fugacity() == 0.0) {
    throw std::invalid_argument("odd N with X = 0: the ensemble is empty");
  }
}

// log of prod_n ((2X)^2 + k^2) / k over k = N - 2n + 1, n = 1..floor(N/2).
double log_product(int n, double x) {
  const double four_x2 = 4.0 * x * x;
  double acc = 0.0;
  for (int j = 1; j <= n / 2; ++j) {
    const double k = n - 2 * j + 1;
    acc += std::log(four_x2 + k * k) - std::log(k);
  }
  return acc;
}

}  // namespace

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("angle must be finite");
  double t = theta - kTwoPi * std::floor((theta + kPi) / kTwoPi);
  if (t >= kPi) t -= kTwoPi;
  if (t < -kPi) t = -kPi;
  return t;
}

double chord_distance(double a, double b) { return 2.0 * std::abs(std::sin(0.5 * (a - b))); }

EnsembleParams::EnsembleParams(int n, double fugacity, double inverse_temperature)
    : n_(n), x_(fugacity) {
  if (n < 1) throw std::invalid_argument("total charge N must be >= 1");
  if (!(fugacity >= 0.0) || !std::isfinite(fugacity)) {
    throw std::invalid_argument("fugacity X must be finite and >= 0");
  }
  if (inverse_temperature != 1.0) {
    throw std::invalid_argument("only inverse temperature b = 1 is solvable");
  }
}

EnsembleParams EnsembleParams::from_ratio(int n, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("r must be >= 0");
  return EnsembleParams(n, n * r);
}

Configuration::Configuration(std::vector<double> xi, std::vector<double> zeta)
    : xi_(std::move(xi)), zeta_(std::move(zeta)) {
  for (double& a : xi_) a = normalize_angle(a);
  for (double& a : zeta_) a = normalize_angle(a);
  std::vector<double> all(xi_);
  all.insert(all.end(), zeta_.begin(), zeta_.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("two particles share an angle");
  }
}

double energy(std::span<const double> xi, std::span<const double> zeta) {
  double e = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    for (std::size_t j = i + 1; j < xi.size(); ++j) {
      e -= std::log(chord_distance(xi[i], xi[j]));
    }
  }
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    for (std::size_t j = i + 1; j < zeta.size(); ++j) {
      e -= 4.0 * std::log(chord_distance(zeta[i], zeta[j]));
    }
  }
  for (double z : zeta) {
    for (double x : xi) e -= 2.0 * std::log(chord_distance(z, x));
  }
  return std::isnan(e) ? kInf : e;
}

double energy(const Configuration& config) { return energy(config.xi(), config.zeta()); }

double log_boltzmann_weight(const Configuration& config, double fugacity) {
  if (!(fugacity >= 0.0)) throw std::invalid_argument("fugacity must be >= 0");
  const int l = config.charge_one_count();
  const int m = config.charge_two_count();
  if (l > 0 && fugacity == 0.0) return -kInf;
  const double e = energy(config);
  if (e == kInf) return -kInf;
  const double log_x = l > 0 ? l * std::log(fugacity) : 0.0;
  return log_x - e - std::lgamma(l + 1.0) - std::lgamma(m + 1.0);
}

double boltzmann_weight(const Configuration& config, double fugacity) {
  return std::exp(log_boltzmann_weight(config, fugacity));
}

double log_partition(const EnsembleParams& params) {
  const int n = params.n();
  const double x = params.fugacity();
  double acc = ((n + 1) / 2) * std::log(kTwoPi) + log_product(n, x);
  if (params.parity() == 1) {
    if (x == 0.0) return -kInf;
    acc += std::log(x);
  }
  return acc;
}

double count_pgf(const EnsembleParams& params, double t) {
  require_count_law_defined(params);
  if (!(t >= 0.0)) throw std::invalid_argument("T must be >= 0");
  const EnsembleParams scaled(params.n(), t * params.fugacity());
  return std::exp(log_partition(scaled) - log_partition(params));
}

double limiting_pgf(double fugacity, double t, Parity parity) {
  if (!(fugacity > 0.0)) throw std::invalid_argument("X must be > 0");
  const double a = kPi * fugacity;
  if (parity == Parity::even) {
    // cosh(a t) / cosh(a) without overflow for large a.
    return std::exp(a * (std::abs(t) - 1.0)) * (1.0 + std::exp(-2.0 * a * std::abs(t))) /
           (1.0 + std::exp(-2.0 * a));
  }
  const double sign_t = t < 0.0 ? -1.0 : 1.0;
  return sign_t * std::exp(a * (std::abs(t) - 1.0)) * (-std::expm1(-2.0 * a * std::abs(t))) /
         (-std::expm1(-2.0 * a));
}

CountDistribution::CountDistribution(int parity, std::vector<double> q)
    : parity_(parity), q_(std::move(q)) {
  if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
  for (double v : q_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("q_n must lie in [0, 1]");
  }
}

double CountDistribution::mean() const {
  double s = 0.0;
  for (double v : q_) s += v;
  return parity_ + 2.0 * s;
}

double CountDistribution::variance() const {
  double s = 0.0;
  for (double v : q_) s += v * (1.0 - v);
  return 4.0 * s;
}

double CountDistribution::pgf(double t) const {
  double acc = parity_ == 1 ? t : 1.0;
  for (double v : q_) acc *= (1.0 - v) + v * t * t;
  return acc;
}

std::vector<double> CountDistribution::pmf() const {
  std::vector<double> p(q_.size() + 1, 0.0);
  p[0] = 1.0;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    for (std::size_t j = i + 1; j > 0; --j) p[j] = p[j] * (1.0 - q_[i]) + p[j - 1] * q_[i];
    p[0] *= 1.0 - q_[i];
  }
  return p;
}

int CountDistribution::sample(Rng& rng) const {
  int pairs = 0;
  for (double v : q_) pairs += rng.uniform() < v ? 1 : 0;
  return parity_ + 2 * pairs;
}

CountDistribution count_distribution(const EnsembleParams& params) {
  require_count_law_defined(params);
  const int n = params.n();
  const double four_x2 = 4.0 * params.fugacity() * params.fugacity();
  std::vector<double> q;
  q.reserve(n / 2);
  for (int j = 1; j <= n / 2; ++j) {
    const double k = n - 2 * j + 1;
    q.push_back(four_x2 / (four_x2 + k * k));
  }
  return CountDistribution(params.parity(), std::move(q));
}

double mean_count(const EnsembleParams& params) { return count_distribution(params).mean(); }

double var_count(const EnsembleParams& params) { return count_distribution(params).variance(); }

double limiting_mean_fraction(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be > 0");
  return 2.0 * r * std::atan(1.0 / (2.0 * r));
}

double limiting_var_fraction(double r) {
  const double four_r2 = 4.0 * r * r;
  return limiting_mean_fraction(r) - four_r2 / (1.0 + four_r2);
}

int sample_count_exact(const EnsembleParams& params, Rng& rng) {
  return count_distribution(params).sample(rng);
}

CltScale clt_scale(int n, double r) {
  if (n < 2) throw std::invalid_argument("CLT scaling needs N >= 2");
  return {n * limiting_mean_fraction(r), std::sqrt(n * limiting_var_fraction(r))};
}

double clt_standardize(int l, int n, double r) {
  const CltScale s = clt_scale(n, r);
  return (l - s.mu) / s.sigma;
}

}  // namespace twocharge
