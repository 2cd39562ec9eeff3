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

#ifndef SYMCLIQUE_SRC_BEST_TRACKER_HPP_
#define SYMCLIQUE_SRC_BEST_TRACKER_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "symclique/clique_infer.hpp"

namespace symclique::internal {

// Keeps the first strictly best candidate. Incremental scores drift by a few
// ulps, so near-ties are settled on exactly recomputed objectives.
class BestTracker {
 public:
  explicit BestTracker(const CliqueProblem& problem) : problem_(problem) {}

  void Offer(std::span<const ValueId> values, double incremental) {
    if (!has_) {
      Take(values, incremental);
      return;
    }
    const double tol = 1e-9 * (1.0 + std::abs(best_incremental_) + std::abs(incremental));
    if (incremental > best_incremental_ + tol) {
      Take(values, incremental);
    } else if (incremental >= best_incremental_ - tol) {
      if (!exact_valid_) {
        best_exact_ = evaluate_objective(problem_, best_values_);
        exact_valid_ = true;
      }
      const double exact = evaluate_objective(problem_, values);
      if (exact > best_exact_) {
        Take(values, incremental);
        best_exact_ = exact;
        exact_valid_ = true;
      }
    }
  }

  bool has() const { return has_; }
  Assignment Result() const { return make_assignment(problem_, best_values_); }
  double ExactScore() {
    if (!exact_valid_) {
      best_exact_ = evaluate_objective(problem_, best_values_);
      exact_valid_ = true;
    }
    return best_exact_;
  }

 private:
  void Take(std::span<const ValueId> values, double incremental) {
    has_ = true;
    best_values_.assign(values.begin(), values.end());
    best_incremental_ = incremental;
    exact_valid_ = false;
  }

  const CliqueProblem& problem_;
  bool has_ = false;
  std::vector<ValueId> best_values_;
  double best_incremental_ = kNegInf;
  double best_exact_ = kNegInf;
  bool exact_valid_ = false;
};

}  // namespace symclique::internal

#endif  // SYMCLIQUE_SRC_BEST_TRACKER_HPP_
