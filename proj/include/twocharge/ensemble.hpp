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
#include <span>
#include <vector>

#include "twocharge/rng.hpp"

namespace twocharge {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Maps an angle onto the branch [-pi, pi).
double normalize_angle(double theta);

/// |e^{i a} - e^{i b}| evaluated as 2|sin((a-b)/2)|.
double chord_distance(double a, double b);

/// sgn with sgn(0) = 0.
inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

/// Total charge N and fugacity X of the grand-canonical two-charge gas.
/// The inverse temperature is pinned to 1.
class EnsembleParams {
 public:
  EnsembleParams(int n, double fugacity, double inverse_temperature = 1.0);

  /// X = N r, the scaling under which both species keep a positive share.
  static EnsembleParams from_ratio(int n, double r);

  int n() const { return n_; }
  double fugacity() const { return x_; }
  int parity() const { return n_ % 2; }

 private:
  int n_;
  double x_;
};

/// Angular positions of the charge-1 particles (xi) and charge-2
/// particles (zeta). Angles are normalized on construction.
class Configuration {
 public:
  Configuration(std::vector<double> xi, std::vector<double> zeta);

  std::span<const double> xi() const { return xi_; }
  std::span<const double> zeta() const { return zeta_; }
  int charge_one_count() const { return static_cast<int>(xi_.size()); }
  int charge_two_count() const { return static_cast<int>(zeta_.size()); }
  int total_charge() const { return charge_one_count() + 2 * charge_two_count(); }

 private:
  std::vector<double> xi_;
  std::vector<double> zeta_;
};

/// Interaction energy E_{L,M}. Returns +inf when two particles coincide.
double energy(std::span<const double> xi, std::span<const double> zeta);
double energy(const Configuration& config);

/// log of X^L e^{-E} / (L! M!); -inf when the weight vanishes.
double log_boltzmann_weight(const Configuration& config, double fugacity);
double boltzmann_weight(const Configuration& config, double fugacity);

/// Natural log of the grand partition function Z_N(X). Odd N with X = 0
/// gives -inf (the ensemble is empty).
double log_partition(const EnsembleParams& params);

/// E[T^L] = Z_N(TX) / Z_N(X).
double count_pgf(const EnsembleParams& params, double t);

enum class Parity { even, odd };

/// N -> infinity generating function of L at fixed X.
double limiting_pgf(double fugacity, double t, Parity parity);

/// Law of the charge-1 count: L = parity + 2 * sum_n Bernoulli(q_n) with
/// independent summands.
class CountDistribution {
 public:
  CountDistribution(int parity, std::vector<double> q);

  int parity() const { return parity_; }
  std::span<const double> q() const { return q_; }

  double mean() const;
  double variance() const;
  double pgf(double t) const;

  /// Probabilities of L = parity + 2j, j = 0..q.size().
  std::vector<double> pmf() const;

  int sample(Rng& rng) const;

 private:
  int parity_;
  std::vector<double> q_;
};

/// q_n = 4X^2 / (4X^2 + (N - 2n + 1)^2) for n = 1..floor(N/2).
CountDistribution count_distribution(const EnsembleParams& params);

double mean_count(const EnsembleParams& params);
double var_count(const EnsembleParams& params);

/// lim E[L_N(Nr)] / N = 2r arctan(1/(2r)).
double limiting_mean_fraction(double r);
/// lim var(L_N(Nr)) / N.
double limiting_var_fraction(double r);

int sample_count_exact(const EnsembleParams& params, Rng& rng);

/// Centering and scale of the count CLT at X = N r.
struct CltScale {
  double mu;
  double sigma;
};
CltScale clt_scale(int n, double r);

/// (L - mu_N) / sigma_N.
double clt_standardize(int l, int n, double r);

}  // namespace twocharge
