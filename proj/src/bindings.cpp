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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "twocharge/correlation.hpp"
#include "twocharge/ensemble.hpp"
#include "twocharge/kernels.hpp"
#include "twocharge/oracle.hpp"
#include "twocharge/pfaffian.hpp"
#include "twocharge/sampler.hpp"
#include "twocharge/verify.hpp"

namespace py = pybind11;
using namespace twocharge;

namespace {

Species species(int s) {
  if (s != 1 && s != 2) throw std::invalid_argument("species must be 1 or 2");
  return static_cast<Species>(s);
}

Entry entry(const std::string& e) {
  if (e == "S") return Entry::S;
  if (e == "DS") return Entry::DS;
  if (e == "IS") return Entry::IS;
  throw std::invalid_argument("entry must be S, DS or IS");
}

Gauge gauge(const std::string& g) {
  if (g == "raw") return Gauge::raw;
  if (g == "rescaled") return Gauge::rescaled;
  throw std::invalid_argument("gauge must be raw or rescaled");
}

Complex pfaffian_of(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return pfaffian(AntisymmetricMatrix(n, flat));
}

py::dict sample(int n, double x, std::uint64_t steps, std::uint64_t burn_in, std::uint64_t thin, int chains,
                int batches, std::uint64_t seed, int threads) {
  ChainConfig c;
  c.params = EnsembleParams(n, x);
  c.steps = steps;
  c.burn_in = burn_in;
  c.thin = thin;
  c.chains = chains;
  c.batches_per_chain = batches;
  c.seed = seed;
  c.threads = threads;
  const ChainResults res = [&] {
    py::gil_scoped_release release;
    return run_chains(c);
  }();
  const Estimate mean = estimate_mean_count(res.blocks);
  py::dict out;
  out["samples"] = res.total.samples();
  out["mean_L"] = mean.value;
  out["mean_L_se"] = mean.se;
  out["exact_mean_L"] = mean_count(c.params);
  out["count_histogram"] = res.total.count_histogram();
  out["acceptance"] = py::dict(py::arg("rotate") = res.moves.rate(MoveType::rotate),
                               py::arg("split") = res.moves.rate(MoveType::split),
                               py::arg("merge") = res.moves.rate(MoveType::merge));
  out["max_energy_drift"] = res.max_energy_drift;
  return out;
}

py::list verify(const std::string& level, std::uint64_t seed) {
  VerifyOptions o;
  if (level == "quick") {
    o.level = VerifyLevel::quick;
  } else if (level == "full") {
    o.level = VerifyLevel::full;
  } else {
    throw std::invalid_argument("level must be quick or full");
  }
  o.seed = seed;
  const std::vector<CheckResult> results = [&] {
    py::gil_scoped_release release;
    return run_acceptance(o);
  }();
  py::list out;
  for (const CheckResult& r : results) {
    out.append(py::dict(py::arg("criterion") = r.criterion, py::arg("anchor") = r.anchor,
                        py::arg("check") = r.check, py::arg("pass") = r.pass, py::arg("gated") = r.gated,
                        py::arg("value") = r.value, py::arg("tolerance") = r.tolerance,
                        py::arg("detail") = r.detail));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-charge circular ensemble";
  py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

  m.def("log_partition", [](int n, double x) { return log_partition(EnsembleParams(n, x)); }, py::arg("n"),
        py::arg("x"));
  m.def("energy", [](const std::vector<double>& xi, const std::vector<double>& zeta) { return energy(xi, zeta); },
        py::arg("xi"), py::arg("zeta"));
  m.def("count_pmf", [](int n, double x) { return count_distribution(EnsembleParams(n, x)).pmf(); },
        py::arg("n"), py::arg("x"), "Probabilities of L = parity + 2j.");
  m.def("mean_count", [](int n, double x) { return mean_count(EnsembleParams(n, x)); }, py::arg("n"), py::arg("x"));
  m.def("var_count", [](int n, double x) { return var_count(EnsembleParams(n, x)); }, py::arg("n"), py::arg("x"));
  m.def("count_pgf", [](int n, double x, double t) { return count_pgf(EnsembleParams(n, x), t); }, py::arg("n"),
        py::arg("x"), py::arg("t"));
  m.def("limiting_pgf",
        [](double x, double t, bool odd) { return limiting_pgf(x, t, odd ? Parity::odd : Parity::even); },
        py::arg("x"), py::arg("t"), py::arg("odd") = false);

  m.def("kernel_entry",
        [](int s, int t, const std::string& e, int n, double x, double theta, double psi, const std::string& g,
           double r) {
          KernelQuery q;
          q.s = species(s);
          q.t = species(t);
          q.kind = entry(e);
          q.gauge = gauge(g);
          q.n = n;
          q.fugacity = x;
          q.r = r;
          q.theta = theta;
          q.psi = psi;
          return finite_entry(q);
        },
        py::arg("s"), py::arg("t"), py::arg("entry"), py::arg("n"), py::arg("x"), py::arg("theta"),
        py::arg("psi"), py::arg("gauge") = "raw", py::arg("r") = 0.0);
  m.def("scaled_kernel_entry",
        [](int s, int t, const std::string& e, double r, double theta, double psi) {
          return scaled_entry(species(s), species(t), entry(e), r, theta, psi);
        },
        py::arg("s"), py::arg("t"), py::arg("entry"), py::arg("r"), py::arg("theta"), py::arg("psi"));
  m.def("coe_entry",
        [](int s, int t, const std::string& e, double delta) {
          return coe_limit_entry(species(s), species(t), entry(e), delta);
        },
        py::arg("s"), py::arg("t"), py::arg("entry"), py::arg("delta"));
  m.def("cse_entry",
        [](int s, int t, const std::string& e, double delta) {
          return cse_limit_entry(species(s), species(t), entry(e), delta);
        },
        py::arg("s"), py::arg("t"), py::arg("entry"), py::arg("delta"));

  m.def("intensity",
        [](int n, double x, const std::vector<double>& xi, const std::vector<double>& zeta, const std::string& g) {
          CorrelationQuery q;
          q.n = n;
          q.fugacity = x;
          q.x = xi;
          q.z = zeta;
          q.gauge = gauge(g);
          return intensity(q);
        },
        py::arg("n"), py::arg("x"), py::arg("xi") = std::vector<double>{},
        py::arg("zeta") = std::vector<double>{}, py::arg("gauge") = "raw");
  m.def("scaled_intensity", &scaled_intensity, py::arg("xi"), py::arg("zeta"), py::arg("r"));
  m.def("pfaffian", &pfaffian_of, py::arg("matrix"), "Pfaffian of a skew-symmetric matrix given as rows.");

  m.def("oracle_partition",
        [](int n, double x, std::uint64_t samples, std::uint64_t seed) {
          OracleSettings s = OracleSettings::defaults_for(n);
          s.samples = samples;
          s.seed = seed;
          const OracleEstimate e = oracle_partition(n, x, s);
          return py::make_tuple(e.value, e.error);
        },
        py::arg("n"), py::arg("x"), py::arg("samples") = 1'000'000, py::arg("seed") = 1,
        "Direct integration over sectors (N <= 4); returns (value, error).");

  m.def("sample", &sample, py::arg("n"), py::arg("x"), py::arg("steps") = 100'000, py::arg("burn_in") = 10'000,
        py::arg("thin") = 10, py::arg("chains") = 4, py::arg("batches") = 4, py::arg("seed") = 1,
        py::arg("threads") = 1);
  m.def("verify", &verify, py::arg("level") = "quick", py::arg("seed") = 1);
}
