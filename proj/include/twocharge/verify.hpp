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
#include <ostream>
#include <string>
#include <vector>

#include "twocharge/table.hpp"

namespace twocharge {

enum class VerifyLevel { quick, full };

struct CheckResult {
  int criterion;
  /// Short label of the identity under test.
  std::string anchor;
  std::string check;
  bool pass;
  /// Informational rows never fail the run.
  bool gated;
  double value;
  double tolerance;
  double seconds;
  std::string detail;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  std::uint64_t seed = 1;
  /// Progress messages, one per criterion; may be null.
  std::ostream* log = nullptr;
};

/// Criteria 1-11. Quick runs the deterministic ones (2-4, 6-10); full adds
/// the oracle integrations, the CLT sampling and the Markov chains.
std::vector<int> criteria_for(VerifyLevel level);

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options);
std::vector<CheckResult> run_acceptance(const VerifyOptions& options);

/// Extra directional check outside the numbered criteria: charge-2 gaps at
/// X = 0 show stronger repulsion than charge-1 gaps at X = 2N (N = 16).
CheckResult spacing_repulsion_check(const VerifyOptions& options);

bool gated_checks_pass(const std::vector<CheckResult>& results);
bool criterion_passes(const std::vector<CheckResult>& results, int criterion);

Table results_table(const std::vector<CheckResult>& results);

}  // namespace twocharge
