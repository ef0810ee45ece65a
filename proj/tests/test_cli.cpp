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

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#ifndef TWOCHARGE_CLI
#error "TWOCHARGE_CLI must name the command-line binary"
#endif

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(TWOCHARGE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (const std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

// Second line of the first CSV block, split into cells.
std::vector<std::string> first_row(const std::string& csv) {
  const std::vector<std::string> lines = split(csv, '\n');
  REQUIRE(lines.size() >= 2);
  return split(lines[1], ',');
}

std::vector<nlohmann::json> json_lines(const std::string& out) {
  std::vector<nlohmann::json> rows;
  for (const std::string& line : split(out, '\n')) {
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  }
  return rows;
}

}  // namespace

TEST_CASE("partition") {
  const Run r = run("partition --n 2 --fugacity 1");
  CHECK(r.code == 0);
  const auto row = first_row(r.out);
  CHECK(std::stod(row[2]) == doctest::Approx(3.4473149788).epsilon(1e-10));

  const Run empty = run("partition --n 3 --fugacity 0");
  CHECK(empty.code == 0);
  CHECK(first_row(empty.out).back() == "1");

  const Run by_ratio = run("partition --n 4 --r 0.25");
  CHECK(first_row(by_ratio.out)[1] == "1");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("partition").code == 2);
  CHECK(run("partition --n -2 --x 1").code == 2);
  CHECK(run("partition --n 2 --x 1 --r 1").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("kernel --species 11 --entry S --gauge raw --n 3 --x 1").code == 2);
  CHECK(run("correlate --n 4 --x 1 --x-angles 0.5,0.5").code == 2);
  CHECK(run("--format xml partition --n 2 --x 1").code == 2);
}

TEST_CASE("JSON lines carry the table name") {
  const Run r = run("counts --n 2000 --r 0.5 --format json");
  CHECK(r.code == 0);
  bool seen = false;
  for (const auto& row : json_lines(r.out)) {
    CHECK(row.contains("table"));
    if (row["table"] == "count_summary") {
      seen = true;
      CHECK(row["mean"].get<double>() == doctest::Approx(2000.0 * M_PI / 4.0).epsilon(1e-3));
    }
  }
  CHECK(seen);
}

TEST_CASE("scaled kernel at zero separation") {
  const Run r = run("kernel --species 11 --entry S --gauge scaled --r 0.5 --delta-grid 0 --format json");
  CHECK(r.code == 0);
  const auto rows = json_lines(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["re"].get<double>() == doctest::Approx(std::atan(1.0)).epsilon(1e-9));
}

TEST_CASE("correlate at N = 2") {
  const Run r = run("correlate --n 2 --x 1 --x-angles 0,3.141592653589793 --format json");
  CHECK(r.code == 0);
  const auto rows = json_lines(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["intensity"].get<double>() == doctest::Approx(1.0 / (5.0 * M_PI)).epsilon(1e-12));

  const double a = json_lines(run("correlate --n 6 --x 1.5 --x-angles 0.1,1 --z-angles 2 --format json").out)[0]["intensity"];
  const double b = json_lines(run("correlate --n 6 --x 1.5 --x-angles 0.1,1 --z-angles 2 --shift 1.3 --format json").out)[0]["intensity"];
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("sample output is deterministic for a seed") {
  const std::string args = "sample --n 4 --x 1 --steps 20000 --chains 2 --seed 7";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run(args + " --seed 8").out != a.out);
  CHECK(run("sample --n 4 --x 1 --p-rotate 0.5 --p-split 0.5 --p-merge 0.5").code == 2);
}

TEST_CASE("verify exits with 1 when a gated check fails") {
  const Run r = run("verify --level quick");
  CHECK(r.code == 1);
  CHECK(r.out.find("criterion,anchor,check,status") == 0);
  CHECK(r.out.find("FAIL") != std::string::npos);
}
