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

#ifndef SYMCLIQUE_CHAIN_MRF_HPP_
#define SYMCLIQUE_CHAIN_MRF_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symclique/common.hpp"
#include "symclique/properties.hpp"

namespace symclique {

// A linear-chain MRF over one token sequence. edge[j] couples positions j and j + 1.
struct ChainInstance {
  std::string id;
  std::vector<std::string> tokens;
  Table node;               // T x |Y|
  std::vector<Table> edge;  // T - 1 tables, |Y| x |Y|
  std::optional<std::vector<int>> gold;

  int length() const { return static_cast<int>(tokens.size()); }
  int num_labels() const { return static_cast<int>(node.cols()); }
  // Shapes must agree; entries must be finite, or -inf when `allow_unreachable`.
  void Validate(bool allow_unreachable = false) const;
};

double chain_score(const ChainInstance& instance, std::span<const int> labels);

struct ChainLabeling {
  std::vector<int> labels;
  double score = 0.0;
};

// Exact MAP; ties resolve to the lexicographically smallest labeling.
ChainLabeling viterbi(const ChainInstance& instance);

// Same chain over augmented labels: potentials are copied from the original
// label and transitions the augmentation forbids get -inf.
ChainInstance augment_instance(const ChainInstance& instance, const Augmentation& augmentation);

// The values of one property tracked by the value DP: ∅, ⊥ and a subset of
// range(p). Local codes are 0 for ∅, 1 for ⊥, 2 + j for the j-th kept value.
class ValueGrid {
 public:
  ValueGrid() = default;
  static ValueGrid Full(int range_size);
  // `kept` is sorted and deduplicated.
  static ValueGrid Restricted(int range_size, std::vector<int> kept);

  int size() const { return 2 + static_cast<int>(kept_.size()); }
  int range_size() const { return range_size_; }
  const std::vector<int>& kept() const { return kept_; }
  bool is_full() const { return static_cast<int>(kept_.size()) == range_size_; }
  // Local code of a value, or -1 when the grid drops it.
  int local(PropertyValue v) const;
  PropertyValue value(int local) const;

 private:
  int range_size_ = 0;
  std::vector<int> kept_;
  std::vector<int> to_local_;
};

namespace internal {
struct Lattice;
}

// M(u) over the product of property grids, with traceback. Codes are mixed
// radix over the local codes, first property fastest.
class AggregatedMessage {
 public:
  AggregatedMessage();
  ~AggregatedMessage();
  AggregatedMessage(AggregatedMessage&&) noexcept;
  AggregatedMessage& operator=(AggregatedMessage&&) noexcept;

  int num_properties() const;
  const ValueGrid& grid(int k) const;
  int size() const;
  double operator[](int code) const;
  std::span<const double> values() const;
  int Pack(std::span<const int> locals) const;
  std::vector<int> Unpack(int code) const;
  // Score of the best labeling with the given property values; -inf when no
  // labeling reaches them or a value lies outside its grid.
  double At(std::span<const PropertyValue> values) const;
  // Lexicographically smallest optimal labeling for `code` (augmented labels).
  // On a restricted grid, labelings firing two distinct values outside the
  // grid are not represented, so entries are lower bounds.
  std::vector<int> Traceback(int code) const;

 private:
  friend AggregatedMessage compute_messages(const ChainInstance&, std::span<const EdgeEvaluator>,
                                            std::span<const ValueGrid>, std::optional<int>);
  std::unique_ptr<internal::Lattice> lattice_;
};

// Exact value DP over (label, property values); instance labels must be the
// evaluators' augmented labels. Empty `grids` means full ranges.
AggregatedMessage property_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                    std::span<const ValueGrid> grids = {});

// Keeps the top `beam_width` (label, values) states per position; entries are lower bounds.
AggregatedMessage beam_property_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                         std::span<const ValueGrid> grids, int beam_width);

AggregatedMessage compute_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                   std::span<const ValueGrid> grids, std::optional<int> beam_width);

// m_{i->p}: for each local value of property p, the best M(u) with u_p fixed
// plus the incoming messages of the other properties. `incoming[k]` is indexed
// by grid(k) local codes and ignored for k == p.
std::vector<double> msg_instance_to_clique(const AggregatedMessage& aggregated, int p,
                                           std::span<const std::vector<double>> incoming);

// Best code of M(u) + sum_k incoming[k](u_k), lowest code on ties.
int best_code(const AggregatedMessage& aggregated, std::span<const std::vector<double>> incoming);

// Grid per property: every component value fired along the independent
// Viterbi MAP of at least one instance in the property's domain. Instances use
// augmented labels.
std::vector<ValueGrid> restrict_ranges(std::span<const ChainInstance> instances,
                                       std::span<const EdgeEvaluator> evaluators);

// Copy of the instance with m(v) - m(∅) added wherever the property fires with
// value v. `message` is indexed by grid local codes.
ChainInstance local_absorb(const ChainInstance& instance, const EdgeEvaluator& evaluator, const ValueGrid& grid,
                           std::span<const double> message);

}  // namespace symclique

#endif  // SYMCLIQUE_CHAIN_MRF_HPP_
