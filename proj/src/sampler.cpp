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

#include "twocharge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace twocharge {

namespace {

constexpr std::uint64_t kDriftInterval = 10'000;

double log_chord(double a, double b) { return std::log(chord_distance(a, b)); }

// Interaction of a charge-q particle at `angle` with every particle of the
// state except the skipped ones: -q sum_j q_j log|e^{i angle} - e^{i a_j}|.
double interaction(double angle, int q, const ChainState& s, int skip_xi = -1,
                   int skip_zeta = -1) {
  double e = 0.0;
  for (int j = 0; j < s.l(); ++j) {
    if (j != skip_xi) e -= q * log_chord(angle, s.xi[j]);
  }
  for (int j = 0; j < s.m(); ++j) {
    if (j != skip_zeta) e -= 2 * q * log_chord(angle, s.zeta[j]);
  }
  return e;
}

double half_gaussian_log_density(double delta, double sigma) {
  return std::log(2.0 / (sigma * std::sqrt(kTwoPi))) - 0.5 * (delta / sigma) * (delta / sigma);
}

double log_factorial(int k) { return std::lgamma(k + 1.0); }

double wrap(double a) { return normalize_angle(a); }

int bin_of(double v, double lo, double hi, int bins) {
  int b = static_cast<int>((v - lo) / (hi - lo) * bins);
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

double ChainConfig::rotate_sigma() const {
  return sigma_rot > 0.0 ? sigma_rot : kTwoPi / params.n();
}

double ChainConfig::split_sigma() const {
  return sigma_split > 0.0 ? sigma_split : kTwoPi / (4.0 * params.n());
}

void ChainConfig::validate() const {
  const double p[3] = {moves.rotate, moves.split, moves.merge};
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("move probabilities must be >= 0");
  }
  if (std::abs(p[0] + p[1] + p[2] - 1.0) > 1e-12) {
    throw std::invalid_argument("move probabilities must sum to 1");
  }
  if ((moves.split > 0.0) != (moves.merge > 0.0)) {
    throw std::invalid_argument("split and merge must both be enabled or both disabled");
  }
  if (!(rotate_sigma() > 0.0) || !(split_sigma() > 0.0)) {
    throw std::invalid_argument("proposal widths must be > 0");
  }
  if (thin == 0) throw std::invalid_argument("thin must be >= 1");
  if (chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (batches_per_chain < 1) throw std::invalid_argument("batches must be >= 1");
  if (steps / thin < static_cast<std::uint64_t>(batches_per_chain)) {
    throw std::invalid_argument("fewer recorded states than batches");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (angle_bins < 1 || separation_bins < 1 || spacing_bins < 1 || !(spacing_max > 0.0)) {
    throw std::invalid_argument("histogram shapes must be positive");
  }
}

ChainState ChainState::initial(const EnsembleParams& params) {
  ChainState s;
  const int m = params.n() / 2;
  for (int i = 0; i < m; ++i) s.zeta.push_back(wrap(-kPi + (i + 0.5) * kTwoPi / m));
  if (params.parity() == 1) s.xi.push_back(-kPi);
  s.energy = recompute_energy(s);
  return s;
}

double MoveStats::rate(MoveType t) const {
  const auto i = static_cast<std::size_t>(t);
  return proposed[i] == 0 ? 0.0 : static_cast<double>(accepted[i]) / proposed[i];
}

void MoveStats::merge(const MoveStats& other) {
  for (std::size_t i = 0; i < 3; ++i) {
    proposed[i] += other.proposed[i];
    accepted[i] += other.accepted[i];
  }
}

double recompute_energy(const ChainState& s) { return energy(s.xi, s.zeta); }

double log_target(const ChainState& s, double fugacity) {
  const double lx = s.l() == 0 ? 0.0 : s.l() * std::log(fugacity);
  return lx - s.energy - log_factorial(s.l()) - log_factorial(s.m());
}

SplitProposal split_proposal(const ChainState& from, const ChainConfig& config, int c,
                             double delta, int a, int b) {
  const int l = from.l();
  const int m = from.m();
  if (c < 0 || c >= m || a == b || a < 0 || b < 0 || a >= l + 2 || b >= l + 2) {
    throw std::invalid_argument("split_proposal: bad indices");
  }
  const double phi = from.zeta[c];
  const double plus = wrap(phi + delta);
  const double minus = wrap(phi - delta);

  ChainState to;
  to.xi.resize(l + 2);
  for (int i = 0, k = 0; i < l + 2; ++i) {
    if (i == a) {
      to.xi[i] = plus;
    } else if (i == b) {
      to.xi[i] = minus;
    } else {
      to.xi[i] = from.xi[k++];
    }
  }
  to.zeta.reserve(m - 1);
  for (int j = 0; j < m; ++j) {
    if (j != c) to.zeta.push_back(from.zeta[j]);
  }

  // Remove the charge-2 particle, then add the two charge-1 particles.
  double e = from.energy - interaction(phi, 2, from, -1, c);
  e += interaction(plus, 1, from, -1, c) + interaction(minus, 1, from, -1, c);
  e -= std::log(chord_distance(plus, minus));
  to.energy = e;

  const double x = config.params.fugacity();
  double log_ratio = -std::numeric_limits<double>::infinity();
  if (x > 0.0 && std::isfinite(e) && delta > 0.0 && delta < 0.5 * kPi) {
    log_ratio = 2.0 * std::log(x) - (e - from.energy) + std::log(static_cast<double>(m)) -
                std::log((l + 1.0) * (l + 2.0)) + std::log(config.moves.merge / config.moves.split) +
                std::log(4.0) - half_gaussian_log_density(delta, config.split_sigma());
  }
  return {std::move(to), log_ratio};
}

MergeProposal merge_proposal(const ChainState& from, const ChainConfig& config, int a, int b,
                             int slot) {
  const int l = from.l();
  const int m = from.m();
  if (a == b || a < 0 || b < 0 || a >= l || b >= l || slot < 0 || slot > m) {
    throw std::invalid_argument("merge_proposal: bad indices");
  }
  double twice = wrap(from.xi[a] - from.xi[b]);
  int plus = a;
  int minus = b;
  if (twice < 0.0) {
    twice = -twice;
    std::swap(plus, minus);
  }
  const double delta = 0.5 * twice;
  const double phi = wrap(from.xi[minus] + delta);

  ChainState to;
  for (int i = 0; i < l; ++i) {
    if (i != a && i != b) to.xi.push_back(from.xi[i]);
  }
  to.zeta = from.zeta;
  to.zeta.insert(to.zeta.begin() + slot, phi);

  double e = from.energy - interaction(from.xi[plus], 1, from, plus, -1) -
             interaction(from.xi[minus], 1, from, minus, -1) -
             std::log(chord_distance(from.xi[plus], from.xi[minus]));
  // New charge-2 particle against everything that remains.
  e += interaction(phi, 2, from) + 2.0 * (log_chord(phi, from.xi[plus]) + log_chord(phi, from.xi[minus]));
  to.energy = e;

  double log_ratio = -std::numeric_limits<double>::infinity();
  if (std::isfinite(e) && delta > 0.0 && delta < 0.5 * kPi) {
    // Reciprocal of the split ratio from `to` back to `from`.
    const int ls = l - 2;
    const int ms = m + 1;
    const double x = config.params.fugacity();
    log_ratio = -(2.0 * std::log(x) - (from.energy - e) + std::log(static_cast<double>(ms)) -
                  std::log((ls + 1.0) * (ls + 2.0)) +
                  std::log(config.moves.merge / config.moves.split) + std::log(4.0) -
                  half_gaussian_log_density(delta, config.split_sigma()));
  }
  return {std::move(to), log_ratio, delta};
}

double log_split_flow(const ChainState& from, const ChainConfig& config, double delta) {
  const int l = from.l();
  const int m = from.m();
  // Density of the new (xi_a, xi_b) pair: (phi, delta) density over |J| = 2.
  return log_target(from, config.params.fugacity()) + std::log(config.moves.split) -
         std::log(static_cast<double>(m)) - std::log((l + 2.0) * (l + 1.0)) +
         half_gaussian_log_density(delta, config.split_sigma()) - std::log(2.0);
}

double log_merge_flow(const ChainState& from, const ChainConfig& config) {
  const int l = from.l();
  const int m = from.m();
  return log_target(from, config.params.fugacity()) + std::log(config.moves.merge) +
         std::log(2.0 / (l * (l - 1.0))) - std::log(m + 1.0);
}

StepOutcome mcmc_step(ChainState& state, const ChainConfig& config, Rng& rng) {
  const double u = rng.uniform();
  MoveType move = MoveType::rotate;
  if (u >= config.moves.rotate) {
    move = u < config.moves.rotate + config.moves.split ? MoveType::split : MoveType::merge;
  }

  if (move == MoveType::rotate) {
    const int total = state.l() + state.m();
    const int i = static_cast<int>(rng.below(total));
    const double step = config.rotate_sigma() * rng.normal();
    const bool charge_one = i < state.l();
    const int j = charge_one ? i : i - state.l();
    const double old_angle = charge_one ? state.xi[j] : state.zeta[j];
    const double new_angle = wrap(old_angle + step);
    const int q = charge_one ? 1 : 2;
    const int skip_xi = charge_one ? j : -1;
    const int skip_zeta = charge_one ? -1 : j;
    const double d = interaction(new_angle, q, state, skip_xi, skip_zeta) -
                     interaction(old_angle, q, state, skip_xi, skip_zeta);
    if (std::isfinite(d) && rng.uniform() < std::exp(-d)) {
      (charge_one ? state.xi[j] : state.zeta[j]) = new_angle;
      state.energy += d;
      return {move, true};
    }
    return {move, false};
  }

  if (move == MoveType::split) {
    if (state.m() == 0) return {move, false};
    const int l = state.l();
    const int c = static_cast<int>(rng.below(state.m()));
    const double delta = std::abs(config.split_sigma() * rng.normal());
    const std::uint64_t pair = rng.below(static_cast<std::uint64_t>(l + 2) * (l + 1));
    const int a = static_cast<int>(pair / (l + 1));
    int b = static_cast<int>(pair % (l + 1));
    if (b >= a) ++b;
    if (!(delta > 0.0 && delta < 0.5 * kPi)) return {move, false};
    SplitProposal p = split_proposal(state, config, c, delta, a, b);
    if (std::log(rng.uniform()) < p.log_ratio) {
      state = std::move(p.to);
      return {move, true};
    }
    return {move, false};
  }

  if (state.l() < 2) return {move, false};
  const int l = state.l();
  const std::uint64_t pair = rng.below(static_cast<std::uint64_t>(l) * (l - 1) / 2);
  // Unrank the unordered pair a < b.
  int a = 0;
  std::uint64_t rest = pair;
  while (rest >= static_cast<std::uint64_t>(l - 1 - a)) {
    rest -= l - 1 - a;
    ++a;
  }
  const int b = a + 1 + static_cast<int>(rest);
  const int slot = static_cast<int>(rng.below(state.m() + 1));
  MergeProposal p = merge_proposal(state, config, a, b, slot);
  if (std::log(rng.uniform()) < p.log_ratio) {
    state = std::move(p.to);
    return {move, true};
  }
  return {move, false};
}

Accumulators::Accumulators(int n, int angle_bins, int separation_bins, int spacing_bins,
                           double spacing_max)
    : n_(n),
      angle_bins_(angle_bins),
      separation_bins_(separation_bins),
      spacing_bins_(spacing_bins),
      spacing_max_(spacing_max),
      counts_(n + 1) {
  for (auto& d : density_) d.assign(angle_bins, 0);
  for (auto& p : pairs_) p.assign(separation_bins, 0);
  for (auto& s : spacing_) s.assign(spacing_bins + 1, 0);
  for (auto& s : unfolded_) s.assign(spacing_bins + 1, 0);
}

Accumulators::Accumulators(const ChainConfig& c)
    : Accumulators(c.params.n(), c.angle_bins, c.separation_bins, c.spacing_bins, c.spacing_max) {}

bool Accumulators::operator==(const Accumulators& o) const {
  return same_shape(o) && samples_ == o.samples_ && counts_ == o.counts_ && density_ == o.density_ &&
         pairs_ == o.pairs_ && spacing_ == o.spacing_ && unfolded_ == o.unfolded_ &&
         degenerate_ == o.degenerate_;
}

bool Accumulators::same_shape(const Accumulators& o) const {
  return n_ == o.n_ && angle_bins_ == o.angle_bins_ && separation_bins_ == o.separation_bins_ &&
         spacing_bins_ == o.spacing_bins_ && spacing_max_ == o.spacing_max_;
}

void Accumulators::add_gaps(std::vector<double>& angles, SpacingKind kind) {
  const auto k = static_cast<std::size_t>(kind);
  const std::size_t count = angles.size();
  if (count == 0) return;
  if (count == 1) {
    ++degenerate_[k];
    return;
  }
  std::sort(angles.begin(), angles.end());
  const double to_scaled = n_ / kTwoPi;
  const double to_unit = static_cast<double>(count) / kTwoPi;
  auto put = [&](std::vector<std::uint64_t>& h, double s) {
    const int b = s >= spacing_max_ ? spacing_bins_ : bin_of(s, 0.0, spacing_max_, spacing_bins_);
    ++h[b];
  };
  for (std::size_t i = 0; i < count; ++i) {
    const double gap = i + 1 < count ? angles[i + 1] - angles[i] : angles[0] + kTwoPi - angles[i];
    put(spacing_[k], gap * to_scaled);
    put(unfolded_[k], gap * to_unit);
  }
}

void Accumulators::record(const ChainState& s) {
  ++samples_;
  ++counts_.at(s.l());
  for (double a : s.xi) ++density_[0][bin_of(a, -kPi, kPi, angle_bins_)];
  for (double a : s.zeta) ++density_[1][bin_of(a, -kPi, kPi, angle_bins_)];

  auto sep = [&](double a, double b) {
    return bin_of(std::abs(wrap(a - b)), 0.0, kPi, separation_bins_);
  };
  // Ordered pairs: each unordered same-species pair counts twice.
  for (int i = 0; i < s.l(); ++i) {
    for (int j = i + 1; j < s.l(); ++j) pairs_[0][sep(s.xi[i], s.xi[j])] += 2;
  }
  for (int i = 0; i < s.m(); ++i) {
    for (int j = i + 1; j < s.m(); ++j) pairs_[1][sep(s.zeta[i], s.zeta[j])] += 2;
  }
  for (double a : s.xi) {
    for (double b : s.zeta) ++pairs_[2][sep(a, b)];
  }

  scratch_.assign(s.xi.begin(), s.xi.end());
  add_gaps(scratch_, SpacingKind::one);
  scratch_.assign(s.zeta.begin(), s.zeta.end());
  add_gaps(scratch_, SpacingKind::two);
  scratch_.assign(s.xi.begin(), s.xi.end());
  scratch_.insert(scratch_.end(), s.zeta.begin(), s.zeta.end());
  add_gaps(scratch_, SpacingKind::pooled);
}

void Accumulators::merge(const Accumulators& o) {
  if (!same_shape(o)) throw std::invalid_argument("cannot merge accumulators of different shape");
  auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  samples_ += o.samples_;
  add(counts_, o.counts_);
  for (std::size_t i = 0; i < 2; ++i) add(density_[i], o.density_[i]);
  for (std::size_t i = 0; i < 3; ++i) {
    add(pairs_[i], o.pairs_[i]);
    add(spacing_[i], o.spacing_[i]);
    add(unfolded_[i], o.unfolded_[i]);
    degenerate_[i] += o.degenerate_[i];
  }
}

double Accumulators::mean_count() const {
  if (samples_ == 0) return 0.0;
  double s = 0.0;
  for (std::size_t l = 0; l < counts_.size(); ++l) s += static_cast<double>(l) * counts_[l];
  return s / static_cast<double>(samples_);
}

namespace {

struct ChainOutput {
  std::vector<Accumulators> blocks;
  MoveStats moves;
  double drift = 0.0;
};

ChainOutput run_one_chain(const ChainConfig& config, int index) {
  Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(index));
  ChainState state = ChainState::initial(config.params);
  ChainOutput out;
  const Accumulators empty(config);
  out.blocks.assign(config.batches_per_chain, empty);

  const std::uint64_t records = config.steps / config.thin;
  std::uint64_t recorded = 0;
  const std::uint64_t total = config.burn_in + config.steps;
  for (std::uint64_t t = 1; t <= total; ++t) {
    const StepOutcome o = mcmc_step(state, config, rng);
    const auto k = static_cast<std::size_t>(o.move);
    ++out.moves.proposed[k];
    out.moves.accepted[k] += o.accepted ? 1 : 0;
    if (state.l() + 2 * state.m() != config.params.n()) {
      throw std::logic_error("total charge changed during a move");
    }
    if (t % kDriftInterval == 0) {
      const double fresh = recompute_energy(state);
      out.drift = std::max(out.drift, std::abs(fresh - state.energy));
      state.energy = fresh;
    }
    if (t > config.burn_in && (t - config.burn_in) % config.thin == 0 && recorded < records) {
      const std::uint64_t block = recorded * config.batches_per_chain / records;
      out.blocks[block].record(state);
      ++recorded;
    }
  }
  return out;
}

}  // namespace

ChainResults run_chains(const ChainConfig& config) {
  config.validate();
  std::vector<ChainOutput> outputs(config.chains);
  const int threads = std::min(config.threads, config.chains);
  if (threads <= 1) {
    for (int c = 0; c < config.chains; ++c) outputs[c] = run_one_chain(config, c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int c = w; c < config.chains; c += threads) outputs[c] = run_one_chain(config, c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ChainResults results{{}, Accumulators(config), {}, 0.0};
  for (auto& o : outputs) {
    for (auto& b : o.blocks) {
      results.total.merge(b);
      results.blocks.push_back(std::move(b));
    }
    results.moves.merge(o.moves);
    results.max_energy_drift = std::max(results.max_energy_drift, o.drift);
  }
  return results;
}

Estimate jackknife_ratio(const std::vector<double>& num, const std::vector<double>& den) {
  if (num.size() != den.size() || num.empty()) {
    throw std::invalid_argument("jackknife_ratio: mismatched inputs");
  }
  double tn = 0.0;
  double td = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    tn += num[i];
    td += den[i];
  }
  const double value = td == 0.0 ? 0.0 : tn / td;
  const std::size_t k = num.size();
  if (k < 2) return {value, std::numeric_limits<double>::quiet_NaN()};
  std::vector<double> loo(k);
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double d = td - den[i];
    loo[i] = d == 0.0 ? 0.0 : (tn - num[i]) / d;
    mean += loo[i];
  }
  mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return {value, std::sqrt(ss * (k - 1.0) / static_cast<double>(k))};
}

Estimate estimate_mean_count(const std::vector<Accumulators>& blocks) {
  std::vector<double> num;
  std::vector<double> den;
  for (const auto& b : blocks) {
    num.push_back(b.mean_count() * static_cast<double>(b.samples()));
    den.push_back(static_cast<double>(b.samples()));
  }
  return jackknife_ratio(num, den);
}

Estimate estimate_count_probability(const std::vector<Accumulators>& blocks, int l) {
  std::vector<double> num;
  std::vector<double> den;
  for (const auto& b : blocks) {
    const auto& h = b.count_histogram();
    num.push_back(l >= 0 && l < static_cast<int>(h.size()) ? static_cast<double>(h[l]) : 0.0);
    den.push_back(static_cast<double>(b.samples()));
  }
  return jackknife_ratio(num, den);
}

std::vector<IntensityBin> estimate_intensity(const std::vector<Accumulators>& blocks,
                                             PairKind pair) {
  if (blocks.empty()) throw std::invalid_argument("no accumulator blocks");
  std::uint64_t total = 0;
  for (const auto& b : blocks) total += b.samples();
  if (total < 1000) throw std::invalid_argument("estimate_intensity needs >= 1000 samples");

  const int bins = blocks.front().separation_bins();
  const double w = kPi / bins;
  // Ordered pairs with |d| in a bin of width w: 2 pi * 2w * R per sample.
  const double norm = 4.0 * kPi * w;
  std::vector<IntensityBin> out;
  for (int i = 0; i < bins; ++i) {
    std::vector<double> num;
    std::vector<double> den;
    std::uint64_t count = 0;
    for (const auto& b : blocks) {
      const std::uint64_t c = b.pairs(pair)[i];
      count += c;
      num.push_back(static_cast<double>(c));
      den.push_back(static_cast<double>(b.samples()) * norm);
    }
    const Estimate e = jackknife_ratio(num, den);
    out.push_back({i * w, (i + 1) * w, e.value, e.se, count, count < 10});
  }
  return out;
}

SpacingTable spacing_histogram(const Accumulators& acc, SpacingKind kind, bool unfolded) {
  const auto& h = unfolded ? acc.unfolded_spacings(kind) : acc.spacings(kind);
  std::uint64_t gaps = 0;
  for (auto v : h) gaps += v;
  SpacingTable t{{}, 0.0, acc.degenerate(kind), gaps};
  const int bins = acc.spacing_bins();
  const double w = acc.spacing_max() / bins;
  const double mass = gaps == 0 ? 0.0 : 1.0 / static_cast<double>(gaps);
  for (int i = 0; i < bins; ++i) {
    t.bins.push_back({i * w, (i + 1) * w, static_cast<double>(h[i]) * mass});
  }
  t.overflow = static_cast<double>(h[bins]) * mass;
  return t;
}

}  // namespace twocharge
