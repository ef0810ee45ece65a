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

#include <cstdio>
#include <iostream>

#include "twocharge/verify.hpp"

using namespace twocharge;

int main() {
  VerifyOptions options;
  options.level = VerifyLevel::full;
  options.log = &std::cerr;
  const std::vector<CheckResult> results = run_acceptance(options);

  bool all = true;
  for (int c = 1; c <= 11; ++c) {
    std::string anchor;
    double seconds = 0.0;
    int rows = 0;
    for (const CheckResult& r : results) {
      if (r.criterion != c) continue;
      anchor = r.anchor;
      seconds += r.seconds;
      ++rows;
    }
    const bool pass = rows > 0 && criterion_passes(results, c);
    all = all && pass;
    std::printf("%s [%d] %s (%d checks, %.1f s)\n", pass ? "PASS" : "FAIL", c, anchor.c_str(), rows, seconds);
    for (const CheckResult& r : results) {
      if (r.criterion == c && r.gated && !r.pass) {
        std::printf("    failed: %s value=%.6g tol=%.3g %s\n", r.check.c_str(), r.value, r.tolerance,
                    r.detail.c_str());
      }
    }
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
