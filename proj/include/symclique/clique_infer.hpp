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

// Clique inference: maximize sum_i psi[i][v_i] + C(histogram(v)) over all
// value assignments of a clique with a symmetric potential C.

#ifndef SYMCLIQUE_CLIQUE_INFER_HPP_
#define SYMCLIQUE_CLIQUE_INFER_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "symclique/common.hpp"
#include "symclique/potentials.hpp"

namespace symclique {

class CliqueProblem {
 public:
  // psi is n x R; throws DimensionError when R disagrees with the potential.
  CliqueProblem(Table psi, CliquePotential potential);

  int n() const { return static_cast<int>(psi_.rows()); }
  int num_values() const { return static_cast<int>(psi_.cols()); }
  const Table& psi() const { return psi_; }
  double psi(int i, ValueId v) const { return psi_(i, v); }
  const CliquePotential& potential() const { return potential_; }

  // Constant c >= 0 such that psi + c is non-negative. Adding c to every
  // entry shifts every objective value by n*c and leaves argmaxes unchanged;
  // approximation ratios are stated on the shifted scale.
  double nonnegative_shift() const;
  double shifted(double score) const { return score + n() * nonnegative_shift(); }

 private:
  Table psi_;
  CliquePotential potential_;
};

struct Assignment {
  std::vector<ValueId> values;
  double score = 0.0;
};

struct Pin {
  int vertex = 0;
  ValueId value = 0;
};

// sum_i psi[i][v_i] + C(hist(values)).
double evaluate_objective(const CliqueProblem& problem, std::span<const ValueId> values);
Assignment make_assignment(const CliqueProblem& problem, std::vector<ValueId> values);

// Every vertex at its own best value (lowest id on ties).
std::vector<ValueId> vertex_argmax(const CliqueProblem& problem);

// One (alpha, k) state of the alpha-pass sweep.
struct SweepState {
  ValueId alpha;
  int k;
  std::span<const ValueId> values;
  double incremental_score;
};

// Visits every (alpha, k) state in sweep order (alpha ascending, k = 1..n).
void for_each_alpha_sweep(const CliqueProblem& problem, const std::function<void(const SweepState&)>& visit);

Assignment alpha_pass(const CliqueProblem& problem);
Assignment alpha_pass_pinned(const CliqueProblem& problem, Pin pin);
// Entry (i, v) is the score of alpha_pass_pinned(problem, {i, v}).
Table max_marginals(const CliqueProblem& problem);
// Sweeps every value subset of size <= q. q = 1 is alpha_pass.
Assignment generalized_alpha_pass(const CliqueProblem& problem, int q);

// Optimal alpha-expansion of `current` (additive potentials only). Returns
// `current` unless some expansion is strictly better.
Assignment expansion_move(const CliqueProblem& problem, const Assignment& current, ValueId alpha);
Assignment alpha_expansion(const CliqueProblem& problem, Assignment init);

// Round-robin best response, ascending vertex order. Defaults to starting
// from vertex_argmax.
Assignment icm(const CliqueProblem& problem, std::optional<Assignment> init = std::nullopt);

struct BruteForceOptions {
  double max_states = 2e6;
};
// Exact optimum; the lexicographically smallest optimal assignment.
Assignment brute_force(const CliqueProblem& problem, BruteForceOptions options = {});
bool brute_force_feasible(const CliqueProblem& problem, BruteForceOptions options = {});

}  // namespace symclique

#endif  // SYMCLIQUE_CLIQUE_INFER_HPP_
