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

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twocharge/correlation.hpp"
#include "twocharge/ensemble.hpp"
#include "twocharge/kernels.hpp"
#include "twocharge/sampler.hpp"
#include "twocharge/stats.hpp"
#include "twocharge/table.hpp"
#include "twocharge/verify.hpp"

using namespace twocharge;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using I = std::int64_t;

// Fugacity from --x/--fugacity or --r (X = N r).
double resolve_fugacity(int n, const std::optional<double>& x, const std::optional<double>& r) {
  if (x && r) throw UsageError("give either --fugacity/--x or --r, not both");
  if (x) return *x;
  if (r) return n * *r;
  throw UsageError("one of --fugacity/--x or --r is required");
}

// "a:b:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    double a = 0.0, b = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
      throw UsageError("--delta-grid expects start:stop:step with step > 0");
    }
    const long count = std::lround(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + i * step);
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad --delta-grid entry: " + tok);
    }
  }
  if (out.empty()) throw UsageError("--delta-grid is empty");
  return out;
}

Species parse_species_char(char c) {
  if (c == '1') return Species::one;
  if (c == '2') return Species::two;
  throw UsageError("--species must be one of 11, 22, 12, 21");
}

void emit(const std::vector<Table>& tables, Format f) { write_tables(std::cout, tables, f); }

int cmd_partition(int n, std::optional<double> x, std::optional<double> r, Format f) {
  const double fug = resolve_fugacity(n, x, r);
  const EnsembleParams p(n, fug);
  const double log_z = log_partition(p);
  const double z = std::exp(log_z);
  Table t("partition", {"N", "X", "log_z", "z", "empty"});
  t.add_row({I{n}, fug, log_z, std::isfinite(z) ? Cell{z} : Cell{}, I{log_z == -INFINITY ? 1 : 0}});
  emit({t}, f);
  return kOk;
}

int cmd_counts(int n, std::optional<double> x, std::optional<double> r, std::uint64_t samples,
               std::uint64_t seed, Format f) {
  const double fug = resolve_fugacity(n, x, r);
  const EnsembleParams p(n, fug);
  const CountDistribution d = count_distribution(p);

  Table q("count_q", {"n", "k", "q"});
  for (std::size_t i = 0; i < d.q().size(); ++i) {
    q.add_row({I(i + 1), I(n - 2 * static_cast<I>(i + 1) + 1), d.q()[i]});
  }

  const double ratio = fug / n;
  const bool scaled = fug > 0.0;
  Table s("count_summary", {"N", "X", "r", "parity", "mean", "variance", "mean_fraction",
                            "var_fraction", "limit_mean_fraction", "limit_var_fraction", "mu_n",
                            "sigma_n", "degenerate"});
  Cell mu, sigma, lm, lv;
  if (scaled) {
    lm = limiting_mean_fraction(ratio);
    lv = limiting_var_fraction(ratio);
    if (n >= 2) {
      const CltScale c = clt_scale(n, ratio);
      mu = c.mu;
      sigma = c.sigma;
    }
  }
  s.add_row({I{n}, fug, ratio, I{d.parity()}, d.mean(), d.variance(), d.mean() / n,
             d.variance() / n, lm, lv, mu, sigma, I{d.variance() == 0.0 ? 1 : 0}});

  Table pmf("count_pmf", {"L", "probability"});
  const std::vector<double> probs = d.pmf();
  for (std::size_t j = 0; j < probs.size(); ++j) {
    pmf.add_row({I(d.parity() + 2 * static_cast<I>(j)), probs[j]});
  }

  std::vector<Table> out = {q, s, pmf};
  if (samples > 0) {
    Rng rng(seed);
    Table draws("count_samples", {"index", "L", "standardized"});
    std::vector<int> values;
    std::vector<double> z;
    const bool standardize = scaled && n >= 2 && std::get<double>(sigma) > 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const int l = d.sample(rng);
      values.push_back(l);
      Cell zc;
      if (standardize) {
        z.push_back(clt_standardize(l, n, ratio));
        zc = z.back();
      }
      draws.add_row({static_cast<I>(i), I{l}, zc});
    }
    out.push_back(draws);
    if (standardize) {
      const CltScale c = clt_scale(n, ratio);
      Table ks("count_ks", {"samples", "ks", "ks_lattice"});
      ks.add_row({static_cast<I>(samples), ks_statistic(z, normal_cdf),
                  ks_statistic_lattice(values, 2, [&](double v) {
                    return normal_cdf((v - c.mu) / c.sigma);
                  })});
      out.push_back(ks);
    }
  }
  emit(out, f);
  return kOk;
}

struct KernelArgs {
  std::string species = "11";
  std::string entry = "S";
  std::string gauge = "raw";
  std::optional<int> n;
  std::optional<double> x;
  std::optional<double> r;
  std::string grid = "0:3:0.1";
};

int cmd_kernel(const KernelArgs& a, Format f) {
  if (a.species.size() != 2) throw UsageError("--species must be one of 11, 22, 12, 21");
  const Species s = parse_species_char(a.species[0]);
  const Species t = parse_species_char(a.species[1]);
  Entry kind;
  if (a.entry == "S") {
    kind = Entry::S;
  } else if (a.entry == "DS") {
    kind = Entry::DS;
  } else if (a.entry == "IS") {
    kind = Entry::IS;
  } else {
    throw UsageError("--entry must be S, DS or IS");
  }
  const std::vector<double> grid = parse_grid(a.grid);

  if (a.gauge == "raw") {
    if (!a.n) throw UsageError("--gauge raw needs --n");
    const double fug = resolve_fugacity(*a.n, a.x, a.r);
    Table tb("kernel", {"delta", "re", "im"});
    for (double d : grid) {
      const Complex v = finite_entry(s, t, kind, *a.n, fug, d, 0.0);
      tb.add_row({d, v.real(), v.imag()});
    }
    emit({tb}, f);
    return kOk;
  }
  if (a.gauge == "rescaled") {
    if (!a.n) throw UsageError("--gauge rescaled needs --n");
    const int n = *a.n;
    double fug = 0.0;
    double r = 0.0;
    if (a.x && a.r) {
      fug = *a.x;
      r = *a.r;
    } else {
      fug = resolve_fugacity(n, a.x, a.r);
      r = fug / n;
    }
    // Delta in units of the mean spacing 2 pi / N, entries times 2 pi / N.
    Table tb("kernel", {"delta", "re", "im", "scaled_re", "scaled_im", "abs_error"});
    for (double d : grid) {
      const Complex v = (kTwoPi / n) * rescaled_entry(s, t, kind, n, fug, r, kTwoPi * d / n, 0.0);
      const Complex w = scaled_entry(s, t, kind, r, d, 0.0);
      tb.add_row({d, v.real(), v.imag(), w.real(), w.imag(), std::abs(v - w)});
    }
    emit({tb}, f);
    return kOk;
  }
  Table tb("kernel", {"delta", "re", "im"});
  if (a.gauge == "scaled") {
    if (!a.r) throw UsageError("--gauge scaled needs --r");
    for (double d : grid) {
      const Complex v = scaled_entry(s, t, kind, *a.r, d, 0.0);
      tb.add_row({d, v.real(), v.imag()});
    }
  } else if (a.gauge == "coe" || a.gauge == "cse") {
    for (double d : grid) {
      const Complex v = a.gauge == "coe" ? coe_limit_entry(s, t, kind, d) : cse_limit_entry(s, t, kind, d);
      tb.add_row({d, v.real(), v.imag()});
    }
  } else {
    throw UsageError("--gauge must be raw, rescaled, scaled, coe or cse");
  }
  emit({tb}, f);
  return kOk;
}

struct CorrelateArgs {
  std::optional<int> n;
  std::optional<double> x;
  std::optional<double> r;
  std::vector<double> x_angles;
  std::vector<double> z_angles;
  bool scaled = false;
  std::string gauge = "raw";
  double shift = 0.0;
};

int cmd_correlate(const CorrelateArgs& a, Format f) {
  if (a.x_angles.empty() && a.z_angles.empty()) {
    throw UsageError("give at least one of --x-angles, --z-angles");
  }
  std::vector<double> xs(a.x_angles), zs(a.z_angles);
  for (double& v : xs) v += a.shift;
  for (double& v : zs) v += a.shift;
  double value = 0.0;
  Table t("correlate", {"l", "m", "N", "X", "r", "shift", "intensity"});
  if (a.scaled) {
    if (!a.r) throw UsageError("--scaled needs --r");
    value = scaled_intensity(xs, zs, *a.r);
    t.add_row({static_cast<I>(xs.size()), static_cast<I>(zs.size()), Cell{}, Cell{}, *a.r, a.shift,
               value});
  } else {
    if (!a.n) throw UsageError("--n is required unless --scaled");
    CorrelationQuery q;
    q.n = *a.n;
    q.fugacity = resolve_fugacity(*a.n, a.x, a.r);
    q.x = xs;
    q.z = zs;
    if (a.gauge == "rescaled") {
      q.gauge = Gauge::rescaled;
    } else if (a.gauge != "raw") {
      throw UsageError("--gauge must be raw or rescaled");
    }
    value = intensity(q);
    t.add_row({static_cast<I>(xs.size()), static_cast<I>(zs.size()), I{q.n}, q.fugacity,
               q.fugacity / q.n, a.shift, value});
  }
  emit({t}, f);
  return kOk;
}

struct SampleArgs {
  int n = 8;
  std::optional<double> x;
  std::optional<double> r;
  ChainConfig config;
};

int cmd_sample(SampleArgs a, Format f) {
  const double fug = resolve_fugacity(a.n, a.x, a.r);
  ChainConfig c = a.config;
  c.params = EnsembleParams(a.n, fug);
  const ChainResults res = run_chains(c);
  const Accumulators& acc = res.total;
  std::vector<Table> out;

  const Estimate ml = estimate_mean_count(res.blocks);
  Table summary("chain_summary", {"N", "X", "chains", "steps", "samples", "mean_L", "mean_L_se",
                                  "exact_mean_L", "max_energy_drift"});
  const double exact = (fug == 0.0 && a.n % 2 == 1) ? std::nan("") : mean_count(c.params);
  summary.add_row({I{a.n}, fug, I{c.chains}, static_cast<I>(c.steps), static_cast<I>(acc.samples()),
                   ml.value, ml.se, exact, res.max_energy_drift});
  out.push_back(summary);

  Table moves("moves", {"move", "proposed", "accepted", "rate"});
  const char* names[3] = {"rotate", "split", "merge"};
  for (int i = 0; i < 3; ++i) {
    moves.add_row({std::string(names[i]), static_cast<I>(res.moves.proposed[i]),
                   static_cast<I>(res.moves.accepted[i]), res.moves.rate(static_cast<MoveType>(i))});
  }
  out.push_back(moves);

  Table counts("count_histogram", {"L", "count", "frequency", "exact"});
  std::vector<double> pmf;
  if (!(fug == 0.0 && a.n % 2 == 1)) pmf = count_distribution(c.params).pmf();
  const int parity = a.n % 2;
  for (int l = 0; l <= a.n; ++l) {
    const std::uint64_t k = acc.count_histogram()[l];
    double want = 0.0;
    if ((l - parity) % 2 == 0 && (l - parity) / 2 < static_cast<int>(pmf.size())) {
      want = pmf[(l - parity) / 2];
    }
    counts.add_row({I{l}, static_cast<I>(k),
                    acc.samples() ? static_cast<double>(k) / acc.samples() : 0.0, want});
  }
  out.push_back(counts);

  Table density("density", {"species", "lo", "hi", "count", "intensity"});
  const double w = kTwoPi / c.angle_bins;
  for (int sp : {1, 2}) {
    for (int b = 0; b < c.angle_bins; ++b) {
      const std::uint64_t k = acc.density(sp)[b];
      density.add_row({I{sp}, -kPi + b * w, -kPi + (b + 1) * w, static_cast<I>(k),
                       acc.samples() ? static_cast<double>(k) / (acc.samples() * w) : 0.0});
    }
  }
  out.push_back(density);

  if (acc.samples() >= 1000) {
    Table pairs("pair_intensity", {"pair", "lo", "hi", "estimate", "se", "count", "underfilled"});
    const std::pair<PairKind, const char*> kinds[] = {
        {PairKind::one_one, "11"}, {PairKind::two_two, "22"}, {PairKind::one_two, "12"}};
    for (auto [kind, label] : kinds) {
      for (const IntensityBin& b : estimate_intensity(res.blocks, kind)) {
        pairs.add_row({std::string(label), b.lo, b.hi, b.estimate,
                       std::isfinite(b.se) ? Cell{b.se} : Cell{}, static_cast<I>(b.count),
                       I{b.underfilled ? 1 : 0}});
      }
    }
    out.push_back(pairs);
  } else {
    std::cerr << "fewer than 1000 recorded states; pair intensities omitted\n";
  }

  Table spacing("spacing", {"set", "lo", "hi", "frequency"});
  Table spacing_summary("spacing_summary", {"set", "gaps", "overflow", "degenerate"});
  const std::pair<SpacingKind, const char*> sets[] = {
      {SpacingKind::one, "1"}, {SpacingKind::two, "2"}, {SpacingKind::pooled, "pooled"}};
  for (auto [kind, label] : sets) {
    const SpacingTable h = spacing_histogram(acc, kind);
    for (const SpacingBin& b : h.bins) spacing.add_row({std::string(label), b.lo, b.hi, b.frequency});
    spacing_summary.add_row({std::string(label), static_cast<I>(h.gaps), h.overflow,
                             static_cast<I>(h.degenerate)});
  }
  out.push_back(spacing);
  out.push_back(spacing_summary);
  emit(out, f);
  return kOk;
}

int cmd_verify(const std::string& level, std::uint64_t seed, Format f) {
  VerifyOptions opt;
  if (level == "quick") {
    opt.level = VerifyLevel::quick;
  } else if (level == "full") {
    opt.level = VerifyLevel::full;
  } else {
    throw UsageError("--level must be quick or full");
  }
  opt.seed = seed;
  opt.log = &std::cerr;
  const std::vector<CheckResult> results = run_acceptance(opt);
  emit({results_table(results)}, f);
  return gated_checks_pass(results) ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-charge circular ensemble: partition functions, kernels, sampling"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::optional<int> n;
  std::optional<double> fug;
  std::optional<double> r;
  auto add_fugacity = [&](CLI::App* sub) {
    auto* fx = sub->add_option("--fugacity,--x", fug, "Fugacity X");
    auto* fr = sub->add_option("--r", r, "Ratio r, X = N r");
    return std::make_pair(fx, fr);
  };

  auto* partition = app.add_subcommand("partition", "Exact partition function");
  partition->add_option("--n", n, "Total charge N")->required();
  add_fugacity(partition);

  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  auto* counts = app.add_subcommand("counts", "Law of the charge-1 count");
  counts->add_option("--n", n, "Total charge N")->required();
  add_fugacity(counts);
  counts->add_option("--samples", samples, "Exact samples to draw");
  counts->add_option("--seed", seed, "RNG seed");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Matrix-kernel entries on a grid of separations");
  kernel->add_option("--species", ka.species)->check(CLI::IsMember({"11", "22", "12", "21"}));
  kernel->add_option("--entry", ka.entry)->check(CLI::IsMember({"S", "DS", "IS"}));
  kernel->add_option("--gauge", ka.gauge)
      ->check(CLI::IsMember({"raw", "rescaled", "scaled", "coe", "cse"}));
  kernel->add_option("--n", ka.n, "Total charge N");
  kernel->add_option("--fugacity,--x", ka.x, "Fugacity X");
  kernel->add_option("--r", ka.r, "Ratio r");
  kernel->add_option("--delta-grid", ka.grid, "start:stop:step or comma list");

  CorrelateArgs ca;
  auto* correlate = app.add_subcommand("correlate", "Correlation intensity R_{l,m}");
  correlate->add_option("--n", ca.n, "Total charge N");
  correlate->add_option("--fugacity,--x", ca.x, "Fugacity X");
  correlate->add_option("--r", ca.r, "Ratio r");
  correlate->add_option("--x-angles", ca.x_angles, "Charge-1 angles")->delimiter(',');
  correlate->add_option("--z-angles", ca.z_angles, "Charge-2 angles")->delimiter(',');
  correlate->add_flag("--scaled", ca.scaled, "Use the scaling-limit kernel");
  correlate->add_option("--gauge", ca.gauge)->check(CLI::IsMember({"raw", "rescaled"}));
  correlate->add_option("--shift", ca.shift, "Rotate all angles by this amount");

  SampleArgs sa;
  ChainConfig& cc = sa.config;
  auto* sample = app.add_subcommand("sample", "Run Markov chains");
  sample->add_option("--n", sa.n, "Total charge N");
  sample->add_option("--fugacity,--x", sa.x, "Fugacity X");
  sample->add_option("--r", sa.r, "Ratio r");
  sample->add_option("--steps", cc.steps, "Steps per chain after burn-in");
  sample->add_option("--burn-in", cc.burn_in);
  sample->add_option("--thin", cc.thin);
  sample->add_option("--chains", cc.chains);
  sample->add_option("--batches", cc.batches_per_chain, "Blocks per chain for error bars");
  sample->add_option("--seed", cc.seed);
  sample->add_option("--threads", cc.threads);
  sample->add_option("--p-rotate", cc.moves.rotate);
  sample->add_option("--p-split", cc.moves.split);
  sample->add_option("--p-merge", cc.moves.merge);
  sample->add_option("--sigma-rot", cc.sigma_rot, "Rotation step (default 2 pi / N)");
  sample->add_option("--sigma-split", cc.sigma_split, "Split spread (default 2 pi / (4N))");
  sample->add_option("--angle-bins", cc.angle_bins);
  sample->add_option("--separation-bins", cc.separation_bins);
  sample->add_option("--spacing-bins", cc.spacing_bins);
  sample->add_option("--spacing-max", cc.spacing_max);

  std::string level = "quick";
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", verify_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const Format f = format == "json" ? Format::json : Format::csv;
  try {
    if (*partition) return cmd_partition(*n, fug, r, f);
    if (*counts) return cmd_counts(*n, fug, r, samples, seed, f);
    if (*kernel) return cmd_kernel(ka, f);
    if (*correlate) return cmd_correlate(ca, f);
    if (*sample) return cmd_sample(sa, f);
    if (*verify) return cmd_verify(level, verify_seed, f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kUsage;
}
