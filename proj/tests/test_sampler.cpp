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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twocharge/ensemble.hpp"
#include "twocharge/sampler.hpp"

using namespace twocharge;

namespace {

ChainConfig small_config(int n, double x, std::uint64_t steps, std::uint64_t seed) {
  ChainConfig c;
  c.params = EnsembleParams(n, x);
  c.steps = steps;
  c.burn_in = 2000;
  c.chains = 4;
  c.batches_per_chain = 4;
  c.seed = seed;
  return c;
}

ChainState random_state(int l, int m, Rng& rng) {
  ChainState s;
  for (int i = 0; i < l; ++i) s.xi.push_back(kTwoPi * rng.uniform() - kPi);
  for (int i = 0; i < m; ++i) s.zeta.push_back(kTwoPi * rng.uniform() - kPi);
  s.energy = recompute_energy(s);
  return s;
}

}  // namespace

TEST_CASE("initial state") {
  const ChainState even = ChainState::initial(EnsembleParams(8, 1.0));
  CHECK(even.l() == 0);
  CHECK(even.m() == 4);
  const ChainState odd = ChainState::initial(EnsembleParams(7, 1.0));
  CHECK(odd.l() == 1);
  CHECK(odd.m() == 3);
  CHECK(std::isfinite(odd.energy));
}

TEST_CASE("split and merge are exact inverses and satisfy detailed balance") {
  Rng rng(9);
  ChainConfig c;
  c.params = EnsembleParams(10, 1.7);
  for (int trial = 0; trial < 200; ++trial) {
    const int l = 2 * static_cast<int>(rng.below(4));
    const int m = (10 - l) / 2;
    const ChainState s = random_state(l, m, rng);
    const int idx = static_cast<int>(rng.below(m));
    const double delta = 0.5 * rng.uniform() + 1e-3;
    const int a = static_cast<int>(rng.below(l + 2));
    int b = static_cast<int>(rng.below(l + 1));
    if (b >= a) ++b;

    const SplitProposal sp = split_proposal(s, c, idx, delta, a, b);
    CHECK(sp.to.l() == l + 2);
    CHECK(sp.to.energy == doctest::Approx(recompute_energy(sp.to)).epsilon(1e-10));

    const MergeProposal mp = merge_proposal(sp.to, c, std::min(a, b), std::max(a, b), idx);
    CHECK(mp.delta == doctest::Approx(delta).epsilon(1e-12));
    CHECK(mp.to.energy == doctest::Approx(s.energy).epsilon(1e-10));
    for (int j = 0; j < m; ++j) CHECK(std::abs(normalize_angle(mp.to.zeta[j] - s.zeta[j])) < 1e-12);
    CHECK(mp.log_ratio == doctest::Approx(-sp.log_ratio).epsilon(1e-10));

    // w(s) q(s -> s') a(s -> s') = w(s') q(s' -> s) a(s' -> s)
    const double fwd = log_split_flow(s, c, delta) + std::min(0.0, sp.log_ratio);
    const double bwd = log_merge_flow(sp.to, c) + std::min(0.0, mp.log_ratio);
    CHECK(std::abs(fwd - bwd) < 1e-12 * std::max(1.0, std::abs(fwd)));
  }
}

TEST_CASE("X = 0 never leaves the all charge-2 sector") {
  const ChainConfig c = small_config(6, 0.0, 20'000, 3);
  const ChainResults res = run_chains(c);
  CHECK(res.moves.accepted[static_cast<int>(MoveType::split)] == 0);
  CHECK(res.total.count_histogram()[0] == res.total.samples());
  for (const IntensityBin& b : estimate_intensity(res.blocks, PairKind::one_one)) {
    CHECK(b.estimate == 0.0);
    CHECK(b.underfilled);
  }
}

TEST_CASE("count law at N = 2 and N = 4") {
  for (int n : {2, 4}) {
    ChainConfig c = small_config(n, 1.0, 200'000, 21 + n);
    c.batches_per_chain = 8;
    const ChainResults res = run_chains(c);
    const std::vector<double> pmf = count_distribution(c.params).pmf();
    for (std::size_t j = 0; j < pmf.size(); ++j) {
      const Estimate e = estimate_count_probability(res.blocks, static_cast<int>(2 * j));
      INFO("N=", n, " L=", 2 * j, " est=", e.value, " exact=", pmf[j], " se=", e.se);
      // Five cells share one bound, and block SEs are themselves noisy.
      CHECK(std::abs(e.value - pmf[j]) <= 4.0 * e.se);
    }
    CHECK(res.max_energy_drift < 1e-9);
  }
}

TEST_CASE("N = 2 pair intensity near antipodal separation") {
  ChainConfig c = small_config(2, 1.0, 400'000, 5);
  c.separation_bins = 16;
  const ChainResults res = run_chains(c);
  const std::vector<IntensityBin> bins = estimate_intensity(res.blocks, PairKind::one_one);
  const IntensityBin& last = bins.back();
  // Bin average of 2|sin(d/2)| / (10 pi) over [15 pi / 16, pi].
  const double w = last.hi - last.lo;
  const double avg = 4.0 * (std::cos(last.lo / 2.0) - std::cos(last.hi / 2.0)) / w / (10.0 * kPi);
  CHECK(std::abs(last.estimate - avg) <= 3.0 * last.se);
  CHECK(last.estimate == doctest::Approx(1.0 / (5.0 * kPi)).epsilon(0.05));
}

TEST_CASE("merging accumulators equals one concatenated stream") {
  ChainConfig c = small_config(6, 1.2, 5'000, 8);
  Rng rng(4);
  ChainState s = ChainState::initial(c.params);
  Accumulators whole(c), first(c), second(c);
  for (int t = 0; t < 6000; ++t) {
    mcmc_step(s, c, rng);
    whole.record(s);
    (t < 2500 ? first : second).record(s);
  }
  Accumulators merged(c);
  merged.merge(second);
  merged.merge(first);
  CHECK(merged == whole);
  Accumulators other(8, 4, 4, 4, 4.0);
  CHECK_THROWS_AS(merged.merge(other), std::invalid_argument);
}

TEST_CASE("identical seeds reproduce identical chains") {
  ChainConfig c = small_config(8, 2.0, 20'000, 99);
  const ChainResults a = run_chains(c);
  c.threads = 2;
  const ChainResults b = run_chains(c);
  CHECK(a.total == b.total);
  c.seed = 100;
  const ChainResults d = run_chains(c);
  CHECK_FALSE(a.total == d.total);
}

TEST_CASE("spacing histograms") {
  const ChainConfig single = small_config(2, 0.0, 5'000, 1);
  const ChainResults one = run_chains(single);
  const SpacingTable t = spacing_histogram(one.total, SpacingKind::two);
  CHECK(t.gaps == 0);
  CHECK(t.degenerate == one.total.samples());

  const ChainConfig c = small_config(8, 2.0, 50'000, 2);
  const ChainResults res = run_chains(c);
  const SpacingTable u = spacing_histogram(res.total, SpacingKind::pooled, true);
  double mean = 0.0;
  double mass = u.overflow;
  for (const SpacingBin& b : u.bins) {
    mean += 0.5 * (b.lo + b.hi) * b.frequency;
    mass += b.frequency;
  }
  CHECK(mass == doctest::Approx(1.0));
  CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("charge-2 gaps at X = 0 repel more strongly than charge-1 gaps at X = 2N") {
  const int n = 16;
  auto first_bin = [&](double x, SpacingKind kind) {
    ChainConfig c = small_config(n, x, 100'000, 12);
    c.spacing_bins = 16;
    return spacing_histogram(run_chains(c).total, kind, true).bins.front().frequency;
  };
  CHECK(first_bin(0.0, SpacingKind::two) < first_bin(2.0 * n, SpacingKind::one));
}

TEST_CASE("configuration validation") {
  ChainConfig c;
  c.moves = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.moves = {0.9, 0.1, 0.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.moves = {};
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.thin = 10;
  c.sigma_rot = -1.0;
  CHECK_NOTHROW(c.validate());
  CHECK(c.rotate_sigma() == doctest::Approx(kPi));

  const ChainConfig tiny = small_config(4, 1.0, 100, 1);
  const ChainResults res = run_chains(tiny);
  CHECK_THROWS_AS(estimate_intensity(res.blocks, PairKind::one_two), std::invalid_argument);
}
