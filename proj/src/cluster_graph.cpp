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

#include "symclique/cluster_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "parallel.hpp"

namespace symclique {

std::string potential_kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kPotts: return "potts";
    case PotentialKind::kEntropy: return "entropy";
    case PotentialKind::kLinearMakespan: return "makespan";
    case PotentialKind::kSquareMakespan: return "makespan2";
    case PotentialKind::kMajority: return "majority";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name) {
  for (auto k : {PotentialKind::kPotts, PotentialKind::kEntropy, PotentialKind::kLinearMakespan,
                 PotentialKind::kSquareMakespan, PotentialKind::kMajority}) {
    if (potential_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown potential kind '" + std::string(name) + "'");
}

CliquePotential make_potential(const PotentialSpec& spec, int num_values) {
  switch (spec.kind) {
    case PotentialKind::kPotts: return CliquePotential::MakePotts(num_values, spec.lambda);
    case PotentialKind::kEntropy: return CliquePotential::MakeEntropy(num_values, spec.lambda);
    case PotentialKind::kLinearMakespan: return CliquePotential::MakeLinearMakespan(num_values, spec.lambda);
    case PotentialKind::kSquareMakespan: return CliquePotential::MakeSquareMakespan(num_values, spec.lambda);
    case PotentialKind::kMajority: {
      Table w(num_values, num_values);
      for (int v = 0; v < num_values; ++v) w(v, v) = spec.lambda;
      return CliquePotential::MakeMajority(std::move(w));
    }
  }
  throw std::invalid_argument("unknown potential kind");
}

std::string clique_solver_name(CliqueSolver solver) {
  switch (solver) {
    case CliqueSolver::kAuto: return "auto";
    case CliqueSolver::kAlphaPass: return "alpha";
    case CliqueSolver::kModifiedAlphaPass: return "modified-alpha";
    case CliqueSolver::kLagrangian: return "lr";
    case CliqueSolver::kExact: return "exact";
  }
  return "unknown";
}

CliqueSolver parse_clique_solver(std::string_view name) {
  for (auto s : {CliqueSolver::kAuto, CliqueSolver::kAlphaPass, CliqueSolver::kModifiedAlphaPass,
                 CliqueSolver::kLagrangian, CliqueSolver::kExact}) {
    if (clique_solver_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown clique solver '" + std::string(name) + "'");
}

std::string message_mode_name(MessageMode mode) {
  switch (mode) {
    case MessageMode::kExact: return "exact";
    case MessageMode::kBeam: return "beam";
    case MessageMode::kLocalAbsorb: return "local";
  }
  return "unknown";
}

MessageMode parse_message_mode(std::string_view name) {
  for (auto m : {MessageMode::kExact, MessageMode::kBeam, MessageMode::kLocalAbsorb}) {
    if (message_mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown message mode '" + std::string(name) + "'");
}

namespace {

std::vector<bool> SentinelMask(int num_values, bool exclude) {
  std::vector<bool> mask(num_values, false);
  if (exclude) mask[PropertyValue::kEmptyCode] = mask[PropertyValue::kBottomCode] = true;
  return mask;
}

// Objective spread bound: any two assignments differ by less than this.
double Gap(const CliqueProblem& problem) {
  double lo = problem.psi(0, 0);
  double hi = lo;
  for (double v : problem.psi().data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return problem.n() * (hi - lo) + 2.0 * problem.potential().MagnitudeBound(problem.n()) + 1.0;
}

using Solve = std::function<std::vector<ValueId>(const CliqueProblem&)>;

// Best objective with vertex i at v: solve with every other value of i
// penalized, then score the pinned assignment on the original problem.
double PenaltyPinned(const CliqueProblem& problem, double gap, int i, ValueId v, const Solve& solve) {
  Table psi = problem.psi();
  for (ValueId u = 0; u < problem.num_values(); ++u) {
    if (u != v) psi(i, u) -= gap;
  }
  auto values = solve(CliqueProblem(std::move(psi), problem.potential()));
  values[i] = v;
  return evaluate_objective(problem, values);
}

}  // namespace

CollectiveModel CollectiveModel::build(std::vector<ChainInstance> instances, LabelSet labels,
                                       std::vector<PropertySpec> specs, CollectiveOptions options) {
  if (options.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (options.damping < 0.0 || options.damping >= 1.0) throw std::invalid_argument("damping must lie in [0, 1)");
  if (options.beam_width < 1) throw std::invalid_argument("beam width must be at least 1");
  CollectiveModel m;
  m.labels_ = std::move(labels);
  m.options_ = options;
  m.specs_ = std::move(specs);
  std::vector<std::string> vocabulary;
  std::unordered_set<std::string> seen;
  for (auto& inst : instances) {
    inst.Validate();
    if (inst.num_labels() != m.labels_.size()) throw DimensionError("instance '" + inst.id + "' has the wrong label count");
    for (const auto& tok : inst.tokens) {
      if (seen.insert(tok).second) vocabulary.push_back(tok);
    }
  }
  m.instances_ = std::move(instances);
  for (const auto& spec : m.specs_) {
    switch (spec.kind) {
      case PropertyKind::kTokenLabel:
        m.properties_.push_back(DecomposableProperty::TokenLabel(m.labels_, spec.anchor));
        break;
      case PropertyKind::kNextLabel:
        m.properties_.push_back(DecomposableProperty::NextLabel(m.labels_, spec.anchor));
        break;
      case PropertyKind::kFirstNonOther:
        m.properties_.push_back(DecomposableProperty::FirstNonOther(m.labels_));
        break;
      case PropertyKind::kBeforeToken:
        m.properties_.push_back(DecomposableProperty::BeforeToken(m.labels_, spec.anchor, vocabulary));
        break;
    }
  }
  m.aug_ = augment_labels(m.labels_, m.properties_);
  for (const auto& p : m.properties_) m.evaluators_.emplace_back(p, m.aug_);
  for (const auto& inst : m.instances_) m.augmented_.push_back(augment_instance(inst, m.aug_));

  const int n = m.num_instances();
  const int k = m.num_properties();
  m.members_.assign(k, {});
  m.incident_.assign(n, {});
  m.slot_.assign(n, std::vector<int>(k, -1));
  for (int p = 0; p < k; ++p) {
    for (int i = 0; i < n; ++i) {
      if (!m.properties_[p].applies(m.instances_[i].tokens)) continue;
      m.slot_[i][p] = static_cast<int>(m.members_[p].size());
      m.members_[p].push_back(i);
      m.incident_[i].push_back(p);
    }
  }
  if (options.restrict) {
    m.grids_ = restrict_ranges(m.augmented_, m.evaluators_);
  } else {
    for (const auto& p : m.properties_) m.grids_.push_back(ValueGrid::Full(p.range_size()));
  }
  for (int p = 0; p < k; ++p) {
    const int r = m.grids_[p].size();
    const int full = PropertyValue::kFirstValueCode + m.properties_[p].range_size();
    m.potentials_.push_back(
        make_potential(m.specs_[p].potential, r).WithExcluded(SentinelMask(r, options.exclude_sentinels)));
    m.full_potentials_.push_back(
        make_potential(m.specs_[p].potential, full).WithExcluded(SentinelMask(full, options.exclude_sentinels)));
    m.to_clique_.emplace_back(m.members_[p].size(), std::vector<double>(r, 0.0));
    m.to_instance_.emplace_back(m.members_[p].size(), std::vector<double>(r, 0.0));
  }
  m.incident_evaluators_.resize(n);
  m.incident_grids_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int p : m.incident_[i]) {
      m.incident_evaluators_[i].push_back(m.evaluators_[p]);
      m.incident_grids_[i].push_back(m.grids_[p]);
    }
  }
  return m;
}

int CollectiveModel::Slot(int i, int p) const {
  const int s = slot_.at(i).at(p);
  if (s < 0) throw std::invalid_argument("instance is outside the property domain");
  return s;
}

const std::vector<double>& CollectiveModel::to_clique(int i, int p) const { return to_clique_[p][Slot(i, p)]; }
const std::vector<double>& CollectiveModel::to_instance(int p, int i) const { return to_instance_[p][Slot(i, p)]; }

void CollectiveModel::set_to_clique(int i, int p, std::vector<double> message) {
  auto& slot = to_clique_[p][Slot(i, p)];
  if (message.size() != slot.size()) throw DimensionError("message does not match the property grid");
  slot = std::move(message);
}

void CollectiveModel::set_to_instance(int p, int i, std::vector<double> message) {
  auto& slot = to_instance_[p][Slot(i, p)];
  if (message.size() != slot.size()) throw DimensionError("message does not match the property grid");
  slot = std::move(message);
}

std::vector<std::vector<double>> CollectiveModel::Incoming(int i) const {
  std::vector<std::vector<double>> out;
  for (int p : incident_[i]) out.push_back(to_instance_[p][Slot(i, p)]);
  return out;
}

AggregatedMessage CollectiveModel::Aggregate(int i) const {
  std::optional<int> beam;
  if (options_.messages == MessageMode::kBeam) beam = options_.beam_width;
  return compute_messages(augmented_[i], incident_evaluators_[i], incident_grids_[i], beam);
}

std::vector<double> CollectiveModel::msg_instance_to_clique(int i, int p) const {
  Slot(i, p);
  const auto& inc = incident_[i];
  const int k = static_cast<int>(std::find(inc.begin(), inc.end(), p) - inc.begin());
  const auto incoming = Incoming(i);
  if (options_.messages != MessageMode::kLocalAbsorb) {
    return symclique::msg_instance_to_clique(Aggregate(i), k, incoming);
  }
  ChainInstance chain = augmented_[i];
  for (int j = 0; j < static_cast<int>(inc.size()); ++j) {
    if (j != k) chain = local_absorb(chain, evaluators_[inc[j]], grids_[inc[j]], incoming[j]);
  }
  std::vector<EdgeEvaluator> one = {evaluators_[p]};
  std::vector<ValueGrid> grid = {grids_[p]};
  auto m = property_messages(chain, one, grid);
  return {m.values().begin(), m.values().end()};
}

CliqueProblem CollectiveModel::clique_problem(int p) const {
  const auto& rows = to_clique_.at(p);
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("property " + properties_[p].name() + " has an empty domain");
  const int r = grids_[p].size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : rows) {
    for (double v : row) {
      if (v == kNegInf) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) throw std::invalid_argument("every incoming message entry is unreachable");
  const double floor = lo - (n * (hi - lo) + 2.0 * potentials_[p].MagnitudeBound(n) + 1.0);
  Table psi(n, r);
  for (int j = 0; j < n; ++j) {
    for (int v = 0; v < r; ++v) psi(j, v) = rows[j][v] == kNegInf ? floor : rows[j][v];
  }
  return CliqueProblem(std::move(psi), potentials_[p]);
}

Table CollectiveModel::CliqueMessages(int p) const {
  const CliqueProblem problem = clique_problem(p);
  const int n = problem.n();
  const int r = problem.num_values();
  const bool majority = problem.potential().family() == PotentialFamily::kMajority;
  Solve solve;
  switch (options_.solver) {
    case CliqueSolver::kAuto:
      if (majority) solve = [this](const CliqueProblem& q) { return lr_solve(q, options_.lr).assignment.values; };
      break;
    case CliqueSolver::kAlphaPass:
      if (majority) solve = [](const CliqueProblem& q) { return modified_alpha_pass(q).values; };
      break;
    case CliqueSolver::kModifiedAlphaPass:
      if (!majority) throw std::invalid_argument("modified α-pass needs a majority potential");
      solve = [](const CliqueProblem& q) { return modified_alpha_pass(q).values; };
      break;
    case CliqueSolver::kLagrangian:
      if (!majority) throw std::invalid_argument("Lagrangian relaxation needs a majority potential");
      solve = [this](const CliqueProblem& q) { return lr_solve(q, options_.lr).assignment.values; };
      break;
    case CliqueSolver::kExact:
      solve = [majority](const CliqueProblem& q) {
        if (brute_force_feasible(q)) return brute_force(q).values;
        if (majority) return exact_majority(q).values;
        throw SizeError("clique too large for exact inference");
      };
      break;
  }
  Table out(n, r);
  if (!solve) {
    out = max_marginals(problem);
  } else {
    const double gap = Gap(problem);
    for (int i = 0; i < n; ++i) {
      for (ValueId v = 0; v < r; ++v) out(i, v) = PenaltyPinned(problem, gap, i, v, solve);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (ValueId v = 0; v < r; ++v) out(i, v) -= problem.psi(i, v);
  }
  return out;
}

std::vector<double> CollectiveModel::msg_clique_to_instance(int p, int i) const {
  const int s = Slot(i, p);
  const Table t = CliqueMessages(p);
  auto row = t.row(s);
  return {row.begin(), row.end()};
}

std::vector<RoundDiagnostics> CollectiveModel::run(int rounds) {
  if (rounds <= 0) rounds = options_.rounds;
  const int n = num_instances();
  const int k = num_properties();
  const double d = options_.damping;
  std::vector<RoundDiagnostics> out;
  for (int round = 1; round <= rounds; ++round) {
    double delta = 0.0;
    // Messages are max-normalized; delta only covers entries finite before and after.
    auto blend = [&](std::vector<double>& old, const std::vector<double>& fresh) {
      double top = kNegInf;
      for (double x : fresh) top = std::max(top, x);
      if (!std::isfinite(top)) top = 0.0;
      for (std::size_t v = 0; v < old.size(); ++v) {
        double x = fresh[v] - top;
        if (d > 0.0 && std::isfinite(old[v]) && std::isfinite(x)) x = (1.0 - d) * x + d * old[v];
        if (std::isfinite(x) && std::isfinite(old[v])) delta = std::max(delta, std::abs(x - old[v]));
        old[v] = x;
      }
    };

    std::vector<std::vector<std::vector<double>>> fresh(n);
    internal::parallel_for(n, options_.threads, [&](int i) {
      const auto& inc = incident_[i];
      if (inc.empty()) return;
      if (options_.messages == MessageMode::kLocalAbsorb) {
        for (int p : inc) fresh[i].push_back(msg_instance_to_clique(i, p));
        return;
      }
      const auto incoming = Incoming(i);
      const auto m = Aggregate(i);
      for (int j = 0; j < static_cast<int>(inc.size()); ++j) {
        fresh[i].push_back(symclique::msg_instance_to_clique(m, j, incoming));
      }
    });
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < static_cast<int>(incident_[i].size()); ++j) {
        const int p = incident_[i][j];
        blend(to_clique_[p][Slot(i, p)], fresh[i][j]);
      }
    }

    std::vector<Table> tables(k);
    internal::parallel_for(k, options_.threads, [&](int p) {
      if (!members_[p].empty()) tables[p] = CliqueMessages(p);
    });
    for (int p = 0; p < k; ++p) {
      for (int s = 0; s < static_cast<int>(members_[p].size()); ++s) {
        auto row = tables[p].row(s);
        blend(to_instance_[p][s], std::vector<double>(row.begin(), row.end()));
      }
    }

    RoundDiagnostics diag;
    diag.round = round;
    diag.labelings = decode();
    diag.objective = joint_objective(diag.labelings);
    diag.max_delta = delta;
    out.push_back(std::move(diag));
  }
  return out;
}

std::vector<std::vector<int>> CollectiveModel::decode() const {
  const int n = num_instances();
  std::vector<std::vector<int>> out(n);
  internal::parallel_for(n, options_.threads, [&](int i) {
    const auto incoming = Incoming(i);
    std::vector<int> labels;
    if (options_.messages == MessageMode::kLocalAbsorb) {
      ChainInstance chain = augmented_[i];
      for (std::size_t j = 0; j < incident_[i].size(); ++j) {
        const int p = incident_[i][j];
        chain = local_absorb(chain, evaluators_[p], grids_[p], incoming[j]);
      }
      labels = viterbi(chain).labels;
    } else {
      const auto m = Aggregate(i);
      labels = m.Traceback(best_code(m, incoming));
    }
    out[i] = aug_.unrelabel(labels);
  });
  return out;
}

PropertyValue CollectiveModel::value_of(int p, int i, std::span<const int> labels) const {
  return property_of_labeling(properties_.at(p), instances_.at(i).tokens, labels);
}

double CollectiveModel::joint_objective(const std::vector<std::vector<int>>& labelings) const {
  if (static_cast<int>(labelings.size()) != num_instances()) throw DimensionError("one labeling per instance expected");
  double total = 0.0;
  for (int i = 0; i < num_instances(); ++i) total += chain_score(instances_[i], labelings[i]);
  for (int p = 0; p < num_properties(); ++p) {
    std::vector<int> counts(full_potentials_[p].num_values(), 0);
    for (int i : members_[p]) ++counts[value_of(p, i, labelings[i]).code()];
    total += full_potentials_[p].EvaluateCounts(counts);
  }
  return total;
}

}  // namespace symclique
