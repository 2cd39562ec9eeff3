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

// Symmetric (cardinality-based) clique potentials. A potential sees only
// the histogram of value counts, never the identity of the vertices.
//
// Families:
//   max-label   C = max_v f_v(n_v)        (linear / square makespan, tables)
//   additive    C = sum_v f_v(n_v)        (Potts, entropy, tables)
//   majority    C = sum_v w[a][v] * n_v,  a = argmax_v n_v (lowest id on ties)
//
// A potential may carry an exclusion mask. Excluded values are dropped from
// the histogram before the family formula is applied.

#ifndef SYMCLIQUE_POTENTIALS_HPP_
#define SYMCLIQUE_POTENTIALS_HPP_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symclique/common.hpp"

namespace symclique {

struct CountHistogram {
  std::vector<int> counts;
  int n = 0;

  int num_values() const { return static_cast<int>(counts.size()); }
  friend bool operator==(const CountHistogram&, const CountHistogram&) = default;
};

// Counts of each value in `values`. Throws RangeError on a value outside [0, R).
CountHistogram histogram_of(std::span<const ValueId> values, int num_values);

enum class PotentialFamily { kMaxLabel, kAdditive, kMajority };

struct LinearMakespan {
  double lambda = 1.0;
};
struct SquareMakespan {
  double lambda = 1.0;
};
// R x (n+1) table: f(v, c) for counts c = 0..n.
struct MaxLabelTables {
  Table f;
};
struct Potts {
  double lambda = 1.0;
};
// lambda * sum_v n_v ln n_v, with 0 ln 0 = 0.
struct Entropy {
  double lambda = 1.0;
};
struct AdditiveTables {
  Table f;
};
// R x R weights, unconstrained.
struct LinearMajority {
  Table w;
};

class CliquePotential {
 public:
  using Form = std::variant<LinearMakespan, SquareMakespan, MaxLabelTables, Potts,
                            Entropy, AdditiveTables, LinearMajority>;

  CliquePotential(int num_values, Form form);

  static CliquePotential MakePotts(int num_values, double lambda);
  static CliquePotential MakeEntropy(int num_values, double lambda);
  static CliquePotential MakeLinearMakespan(int num_values, double lambda);
  static CliquePotential MakeSquareMakespan(int num_values, double lambda);
  static CliquePotential MakeMaxLabelTables(Table f);
  static CliquePotential MakeAdditiveTables(Table f);
  static CliquePotential MakeMajority(Table w);

  int num_values() const { return num_values_; }
  PotentialFamily family() const;
  const Form& form() const { return form_; }
  std::string name() const;

  // Returns a copy whose histogram ignores every value with mask[v] set.
  CliquePotential WithExcluded(std::vector<bool> mask) const;
  bool excluded(ValueId v) const { return !excluded_.empty() && excluded_[v]; }
  bool has_exclusions() const;

  // Largest count the potential accepts, if bounded by a table.
  std::optional<int> max_count() const;

  // Validating entry point.
  double Evaluate(const CountHistogram& hist) const;
  // Unchecked: counts.size() == num_values().
  double EvaluateCounts(std::span<const int> counts) const;

  // f_v(count) for max-label and additive potentials; f_v(0) for an excluded v.
  double Term(ValueId v, int count) const;

  // Majority value of a histogram under the mask, lowest id on ties.
  // Empty when no counted value has a positive count.
  std::optional<ValueId> MajorityOf(std::span<const int> counts) const;
  // w[a][v], or 0 when v is excluded. Majority family only.
  double MajorityWeight(ValueId a, ValueId v) const;

  // A bound B with |C(h)| <= B for every histogram with total n.
  double MagnitudeBound(int n) const;

 private:
  int num_values_;
  Form form_;
  std::vector<bool> excluded_;
};

// Incremental evaluation of a potential while single vertices change value.
// Additive potentials update in O(1), max-label in O(log R), majority in O(R).
class HistogramScorer {
 public:
  HistogramScorer(const CliquePotential& potential, std::vector<int> counts);

  void Move(ValueId from, ValueId to);
  double score() const;
  const std::vector<int>& counts() const { return counts_; }

 private:
  const CliquePotential* potential_;
  PotentialFamily family_;
  std::vector<int> counts_;
  double additive_sum_ = 0.0;
  std::multiset<double> terms_;
};

}  // namespace symclique

#endif  // SYMCLIQUE_POTENTIALS_HPP_
