// Copyright 2026 The symclique Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMCLIQUE_MAJORITY_INFER_HPP_
#define SYMCLIQUE_MAJORITY_INFER_HPP_

#include <optional>
#include <span>
#include <vector>

#include "symclique/clique_infer.hpp"

namespace symclique {

// All functions here expect a CliqueProblem whose potential is a linear
// majority potential and throw std::invalid_argument otherwise.

// Majority value of an assignment: count argmax over counted values, lowest
// id on ties. Empty when every vertex holds an excluded value.
std::optional<ValueId> majority_value(const CliqueProblem& problem, std::span<const ValueId> values);

Assignment modified_alpha_pass(const CliqueProblem& problem);

// Best assignment with exactly k vertices at alpha and alpha as the majority.
std::optional<Assignment> exact_majority_subproblem(const CliqueProblem& problem, ValueId alpha, int k);
// Best assignment whose majority is alpha; empty when alpha is excluded.
std::optional<Assignment> exact_majority_for(const CliqueProblem& problem, ValueId alpha);
Assignment exact_majority(const CliqueProblem& problem);

struct Multipliers {
  std::vector<double> gamma;
  ValueId alpha = 0;
};

struct LagrangianValue {
  double value = 0.0;
  std::vector<ValueId> z;
};

// Modified vertex potential psi^alpha(i, v) under the given multipliers.
double modified_potential(const CliqueProblem& problem, const Multipliers& mult, int i, ValueId v);
LagrangianValue compute_L(const CliqueProblem& problem, const Multipliers& mult);

enum class LrStrategy { kSubgradient, kGolden, kConservative };

struct LrConfig {
  int max_iters = 100;
  double tolerance = 1e-2;
  LrStrategy strategy = LrStrategy::kConservative;
  double subgradient_step = 1.0;
  bool record_trace = false;
};

struct Violation {
  ValueId value = -1;  // -1: no violation
  bool count_excess = false;
  double magnitude = 0.0;
  double upper_bound = 0.0;  // UB(value)
};

Violation worst_violator(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                         double tolerance);

// One multiplier step. `iteration` feeds the subgradient schedule
// eta = subgradient_step / (1 + iteration).
Multipliers update_gamma(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                         const LrConfig& config, int iteration);

struct LrTraceRow {
  ValueId alpha = 0;
  int iteration = 0;
  double lagrangian = 0.0;
  ValueId violator = -1;
  double violation = 0.0;
};

struct LrResult {
  Assignment assignment;
  double bound = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<LrTraceRow> trace;
};

LrResult lr_solve(const CliqueProblem& problem, const LrConfig& config = {});

}  // namespace symclique

#endif  // SYMCLIQUE_MAJORITY_INFER_HPP_
