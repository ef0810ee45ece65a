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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twocharge/ensemble.hpp"
#include "twocharge/rng.hpp"

namespace twocharge {

enum class MoveType { rotate = 0, split = 1, merge = 2 };

struct MoveProbabilities {
  double rotate = 0.8;
  double split = 0.1;
  double merge = 0.1;
};

struct ChainConfig {
  EnsembleParams params{2, 1.0};
  MoveProbabilities moves;
  /// <= 0 selects 2 pi / N.
  double sigma_rot = 0.0;
  /// <= 0 selects 2 pi / (4N).
  double sigma_split = 0.0;
  /// Steps per chain after burn-in.
  std::uint64_t steps = 1'000'000;
  std::uint64_t burn_in = 10'000;
  std::uint64_t thin = 10;
  int chains = 8;
  /// Each chain's records are split into this many consecutive blocks; the
  /// blocks are the resampling units for error bars.
  int batches_per_chain = 1;
  std::uint64_t seed = 1;
  int threads = 1;

  int angle_bins = 32;
  int separation_bins = 32;
  int spacing_bins = 40;
  double spacing_max = 4.0;

  double rotate_sigma() const;
  double split_sigma() const;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Labeled configuration with cached energy and counts.
struct ChainState {
  std::vector<double> xi;
  std::vector<double> zeta;
  double energy = 0.0;

  int l() const { return static_cast<int>(xi.size()); }
  int m() const { return static_cast<int>(zeta.size()); }

  /// All charge-2 particles evenly spaced, plus one charge-1 at odd N.
  static ChainState initial(const EnsembleParams& params);
};

struct MoveStats {
  std::array<std::uint64_t, 3> proposed{};
  std::array<std::uint64_t, 3> accepted{};

  double rate(MoveType t) const;
  void merge(const MoveStats& other);
};

enum class PairKind { one_one = 0, two_two = 1, one_two = 2 };
enum class SpacingKind { one = 0, two = 1, pooled = 2 };

/// Integer-valued streaming statistics. Merging is exact, so the order in
/// which chains are combined never matters.
class Accumulators {
 public:
  Accumulators(int n, int angle_bins, int separation_bins, int spacing_bins, double spacing_max);
  explicit Accumulators(const ChainConfig& config);

  void record(const ChainState& state);
  void merge(const Accumulators& other);
  bool same_shape(const Accumulators& other) const;

  int n() const { return n_; }
  int angle_bins() const { return angle_bins_; }
  int separation_bins() const { return separation_bins_; }
  int spacing_bins() const { return spacing_bins_; }
  double spacing_max() const { return spacing_max_; }
  std::uint64_t samples() const { return samples_; }

  /// Index L = 0..N.
  const std::vector<std::uint64_t>& count_histogram() const { return counts_; }
  /// Angle histogram on [-pi, pi) for species 1 or 2.
  const std::vector<std::uint64_t>& density(int species) const { return density_.at(species - 1); }
  /// Ordered-pair separations |d| on [0, pi].
  const std::vector<std::uint64_t>& pairs(PairKind k) const {
    return pairs_[static_cast<int>(k)];
  }
  /// Successive gaps times N / (2 pi) on [0, spacing_max); the last entry
  /// is the overflow bin.
  const std::vector<std::uint64_t>& spacings(SpacingKind k) const {
    return spacing_[static_cast<int>(k)];
  }
  /// Successive gaps times (species count) / (2 pi), i.e. unit mean, same
  /// binning and overflow convention.
  const std::vector<std::uint64_t>& unfolded_spacings(SpacingKind k) const {
    return unfolded_[static_cast<int>(k)];
  }
  /// Recorded states in which the species (or pooled set) had exactly one
  /// particle, so its only gap is the full circle.
  std::uint64_t degenerate(SpacingKind k) const { return degenerate_[static_cast<int>(k)]; }

  /// Empirical E[L].
  double mean_count() const;

  /// Compares recorded data only.
  bool operator==(const Accumulators& o) const;

 private:
  void add_gaps(std::vector<double>& angles, SpacingKind kind);

  int n_;
  int angle_bins_;
  int separation_bins_;
  int spacing_bins_;
  double spacing_max_;
  std::uint64_t samples_ = 0;
  std::vector<std::uint64_t> counts_;
  std::array<std::vector<std::uint64_t>, 2> density_;
  std::array<std::vector<std::uint64_t>, 3> pairs_;
  std::array<std::vector<std::uint64_t>, 3> spacing_;
  std::array<std::vector<std::uint64_t>, 3> unfolded_;
  std::array<std::uint64_t, 3> degenerate_{};
  std::vector<double> scratch_;
};

/// Unnormalized log target log(X^L e^{-E} / (L! M!)) of a labeled state.
double log_target(const ChainState& state, double fugacity);

/// Recomputes the energy of the state from scratch.
double recompute_energy(const ChainState& state);

/// One Metropolis-Hastings step. Returns the move type attempted and
/// whether it was accepted.
struct StepOutcome {
  MoveType move;
  bool accepted;
};
StepOutcome mcmc_step(ChainState& state, const ChainConfig& config, Rng& rng);

/// Acceptance probability of splitting charge-2 particle `c` of `from` with
/// half-width `delta`, inserting phi + delta at slot a and phi - delta at
/// slot b of the new charge-1 list. Also returns the resulting state.
struct SplitProposal {
  ChainState to;
  double log_ratio;
};
SplitProposal split_proposal(const ChainState& from, const ChainConfig& config, int c,
                             double delta, int a, int b);
/// Merge of the unordered charge-1 pair {a, b} of `from`, inserting the new
/// charge-2 particle at slot `slot`.
struct MergeProposal {
  ChainState to;
  double log_ratio;
  double delta;
};
MergeProposal merge_proposal(const ChainState& from, const ChainConfig& config, int a, int b,
                             int slot);

/// log[w(s) q(s -> s')] for a split with the given geometry and for the
/// matching merge. Used for the detailed-balance check.
double log_split_flow(const ChainState& from, const ChainConfig& config, double delta);
double log_merge_flow(const ChainState& from, const ChainConfig& config);

struct ChainResults {
  /// One accumulator per (chain, batch) block, chain-major.
  std::vector<Accumulators> blocks;
  Accumulators total;
  MoveStats moves;
  /// Largest |cached - recomputed| energy seen at the periodic checks.
  double max_energy_drift = 0.0;
};

ChainResults run_chains(const ChainConfig& config);

struct Estimate {
  double value;
  double se;
};

/// Ratio estimate sum(num) / sum(den) with a delete-one jackknife standard
/// error over blocks.
Estimate jackknife_ratio(const std::vector<double>& num, const std::vector<double>& den);

/// Empirical E[L] and P(L = l) with block-jackknife errors.
Estimate estimate_mean_count(const std::vector<Accumulators>& blocks);
Estimate estimate_count_probability(const std::vector<Accumulators>& blocks, int l);

struct IntensityBin {
  double lo;
  double hi;
  double estimate;
  double se;
  std::uint64_t count;
  bool underfilled;
};

/// Binned pair intensity R(0, d) averaged over |d| in each bin, per mu x mu.
/// Needs at least 1000 recorded samples in total.
std::vector<IntensityBin> estimate_intensity(const std::vector<Accumulators>& blocks, PairKind pair);

struct SpacingBin {
  double lo;
  double hi;
  double frequency;
};
struct SpacingTable {
  std::vector<SpacingBin> bins;
  /// Mass beyond spacing_max.
  double overflow;
  std::uint64_t degenerate;
  std::uint64_t gaps;
};
SpacingTable spacing_histogram(const Accumulators& acc, SpacingKind kind, bool unfolded = false);

}  // namespace twocharge
