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

#ifndef SYMCLIQUE_CLUSTER_GRAPH_HPP_
#define SYMCLIQUE_CLUSTER_GRAPH_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "symclique/chain_mrf.hpp"
#include "symclique/clique_infer.hpp"
#include "symclique/majority_infer.hpp"
#include "symclique/potentials.hpp"
#include "symclique/properties.hpp"

namespace symclique {

enum class PotentialKind { kPotts, kEntropy, kLinearMakespan, kSquareMakespan, kMajority };

std::string potential_kind_name(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

// Clique potential of a property, parameterized by lambda. Majority uses
// w[a][v] = lambda when a == v, else 0.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::kPotts;
  double lambda = 1.0;
};

CliquePotential make_potential(const PotentialSpec& spec, int num_values);

struct PropertySpec {
  PropertyKind kind = PropertyKind::kNextLabel;
  std::string anchor;  // label for nextlabel/beforetoken, token for tokenlabel
  PotentialSpec potential;
};

enum class CliqueSolver { kAuto, kAlphaPass, kModifiedAlphaPass, kLagrangian, kExact };
enum class MessageMode { kExact, kBeam, kLocalAbsorb };

std::string clique_solver_name(CliqueSolver solver);
CliqueSolver parse_clique_solver(std::string_view name);
std::string message_mode_name(MessageMode mode);
MessageMode parse_message_mode(std::string_view name);

struct CollectiveOptions {
  int rounds = 3;
  // Leave ∅ and ⊥ out of the count histogram.
  bool exclude_sentinels = true;
  bool restrict = true;
  // kAuto: α-pass max-marginals, or Lagrangian relaxation for majority.
  CliqueSolver solver = CliqueSolver::kAuto;
  MessageMode messages = MessageMode::kExact;
  int beam_width = 16;
  double damping = 0.0;
  LrConfig lr;
  int threads = 1;
};

struct RoundDiagnostics {
  int round = 0;
  std::vector<std::vector<int>> labelings;
  double objective = 0.0;
  double max_delta = 0.0;
};

class CollectiveModel {
 public:
  // Instances use the original label ids of `labels`.
  static CollectiveModel build(std::vector<ChainInstance> instances, LabelSet labels,
                               std::vector<PropertySpec> specs, CollectiveOptions options = {});

  int num_instances() const { return static_cast<int>(instances_.size()); }
  int num_properties() const { return static_cast<int>(properties_.size()); }
  const ChainInstance& instance(int i) const { return instances_.at(i); }
  const ChainInstance& augmented(int i) const { return augmented_.at(i); }
  const LabelSet& labels() const { return labels_; }
  const Augmentation& augmentation() const { return aug_; }
  const CollectiveOptions& options() const { return options_; }
  const DecomposableProperty& property(int p) const { return properties_.at(p); }
  const ValueGrid& grid(int p) const { return grids_.at(p); }
  // Potential over the grid values of p (the clique's R).
  const CliquePotential& potential(int p) const { return potentials_.at(p); }
  // Instances in dom(p), in index order.
  const std::vector<int>& members(int p) const { return members_.at(p); }
  // Properties whose domain contains instance i, in index order.
  const std::vector<int>& incident(int i) const { return incident_.at(i); }

  // Current messages, indexed by grid local codes of p.
  const std::vector<double>& to_clique(int i, int p) const;
  const std::vector<double>& to_instance(int p, int i) const;
  void set_to_clique(int i, int p, std::vector<double> message);
  void set_to_instance(int p, int i, std::vector<double> message);

  // Clique problem over dom(p) with psi rows m_{j->p}; unreachable entries are
  // floored below every feasible objective.
  CliqueProblem clique_problem(int p) const;
  // m_{p->i} from the current m_{j->p}.
  std::vector<double> msg_clique_to_instance(int p, int i) const;
  // m_{i->p} from the current m_{p'->i}.
  std::vector<double> msg_instance_to_clique(int i, int p) const;

  // Synchronous rounds: all m_{i->p}, then all m_{p->i}, then decode.
  std::vector<RoundDiagnostics> run(int rounds = 0);
  // Original-label labelings under the current messages.
  std::vector<std::vector<int>> decode() const;

  // Sum of chain scores plus each property's potential over the firing
  // histogram of its domain, evaluated on the full range of p.
  double joint_objective(const std::vector<std::vector<int>>& labelings) const;
  // Property value of p on an original labeling of instance i.
  PropertyValue value_of(int p, int i, std::span<const int> labels) const;

 private:
  CollectiveModel() = default;
  int Slot(int i, int p) const;
  AggregatedMessage Aggregate(int i) const;
  std::vector<std::vector<double>> Incoming(int i) const;
  Table CliqueMessages(int p) const;

  std::vector<ChainInstance> instances_;
  std::vector<ChainInstance> augmented_;
  LabelSet labels_;
  Augmentation aug_;
  CollectiveOptions options_;
  std::vector<PropertySpec> specs_;
  std::vector<DecomposableProperty> properties_;
  std::vector<EdgeEvaluator> evaluators_;
  std::vector<std::vector<EdgeEvaluator>> incident_evaluators_;
  std::vector<std::vector<ValueGrid>> incident_grids_;
  std::vector<ValueGrid> grids_;
  std::vector<CliquePotential> potentials_;
  std::vector<CliquePotential> full_potentials_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> slot_;  // [i][p] -> position in members_[p], or -1
  // Indexed [p][slot].
  std::vector<std::vector<std::vector<double>>> to_clique_;
  std::vector<std::vector<std::vector<double>>> to_instance_;
};

}  // namespace symclique

#endif  // SYMCLIQUE_CLUSTER_GRAPH_HPP_
