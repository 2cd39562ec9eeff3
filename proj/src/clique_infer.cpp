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

#include "symclique/clique_infer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "best_tracker.hpp"

namespace symclique {

using internal::BestTracker;

namespace {

void CheckValues(const CliqueProblem& problem, std::span<const ValueId> values) {
  if (static_cast<int>(values.size()) != problem.n()) {
    throw DimensionError("assignment has " + std::to_string(values.size()) + " entries, problem has " +
                         std::to_string(problem.n()) + " vertices");
  }
  for (ValueId v : values) {
    if (v < 0 || v >= problem.num_values()) throw RangeError("assignment value outside [0, R)");
  }
}

double ObjectiveUnchecked(const CliqueProblem& problem, std::span<const ValueId> values,
                          std::span<const int> counts) {
  double vertex = 0.0;
  for (int i = 0; i < problem.n(); ++i) vertex += problem.psi(i, values[i]);
  return vertex + problem.potential().EvaluateCounts(counts);
}

// Best single-vertex assignment; honours an optional pin.
Assignment SingleVertex(const CliqueProblem& problem, const Pin* pin) {
  std::vector<int> counts(problem.num_values(), 0);
  Assignment best{{0}, kNegInf};
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    if (pin != nullptr && v != pin->value) continue;
    counts[v] = 1;
    const double s = problem.psi(0, v) + problem.potential().EvaluateCounts(counts);
    counts[v] = 0;
    if (s > best.score) best = {{v}, s};
  }
  return best;
}

// Sweep over a value set A: vertex i takes in_value[i] (its best value in A)
// or out_value[i] (its best value outside A). The top-k vertices of `order`
// take their A-value.
struct SweepPlan {
  std::vector<ValueId> in_value;
  std::vector<ValueId> out_value;
  std::vector<int> order;
  bool complement_empty = false;
};

SweepPlan BuildPlan(const CliqueProblem& problem, const std::vector<char>& in_set) {
  const int n = problem.n();
  const int r = problem.num_values();
  SweepPlan plan;
  plan.in_value.assign(n, -1);
  plan.out_value.assign(n, -1);
  plan.complement_empty = std::all_of(in_set.begin(), in_set.end(), [](char c) { return c != 0; });
  std::vector<double> margin(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (ValueId v = 0; v < r; ++v) {
      ValueId& slot = in_set[v] ? plan.in_value[i] : plan.out_value[i];
      if (slot < 0 || problem.psi(i, v) > problem.psi(i, slot)) slot = v;
    }
    if (!plan.complement_empty) {
      margin[i] = problem.psi(i, plan.in_value[i]) - problem.psi(i, plan.out_value[i]);
    }
  }
  plan.order.resize(n);
  std::iota(plan.order.begin(), plan.order.end(), 0);
  if (!plan.complement_empty) {
    std::stable_sort(plan.order.begin(), plan.order.end(),
                     [&](int a, int b) { return margin[a] > margin[b]; });
  }
  return plan;
}

template <class Visit>
void RunSweep(const CliqueProblem& problem, const SweepPlan& plan, const std::vector<char>& in_set,
              const Pin* pin, Visit&& visit) {
  const int n = problem.n();
  std::vector<int> order;
  order.reserve(n);
  std::vector<ValueId> values(n);
  const bool pin_inside = pin != nullptr && in_set[pin->value];
  if (pin_inside) order.push_back(pin->vertex);
  for (int i : plan.order) {
    if (pin == nullptr || i != pin->vertex) order.push_back(i);
  }
  auto target = [&](int i) { return (pin != nullptr && i == pin->vertex) ? pin->value : plan.in_value[i]; };

  if (plan.complement_empty) {
    for (int i = 0; i < n; ++i) values[i] = target(i);
    const CountHistogram hist = histogram_of(values, problem.num_values());
    visit(n, std::span<const ValueId>(values), ObjectiveUnchecked(problem, values, hist.counts));
    return;
  }

  for (int i = 0; i < n; ++i) values[i] = plan.out_value[i];
  if (pin != nullptr && !pin_inside) values[pin->vertex] = pin->value;
  double vertex_sum = 0.0;
  for (int i = 0; i < n; ++i) vertex_sum += problem.psi(i, values[i]);
  HistogramScorer scorer(problem.potential(), histogram_of(values, problem.num_values()).counts);
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const int i = order[k - 1];
    const ValueId next = target(i);
    vertex_sum += problem.psi(i, next) - problem.psi(i, values[i]);
    scorer.Move(values[i], next);
    values[i] = next;
    visit(static_cast<int>(k), std::span<const ValueId>(values), vertex_sum + scorer.score());
  }
}

std::vector<char> Singleton(int r, ValueId alpha) {
  std::vector<char> set(r, 0);
  set[alpha] = 1;
  return set;
}

void CheckPin(const CliqueProblem& problem, Pin pin) {
  if (pin.vertex < 0 || pin.vertex >= problem.n()) throw RangeError("pin vertex outside [0, n)");
  if (pin.value < 0 || pin.value >= problem.num_values()) throw RangeError("pin value outside [0, R)");
}

}  // namespace

CliqueProblem::CliqueProblem(Table psi, CliquePotential potential)
    : psi_(std::move(psi)), potential_(std::move(potential)) {
  if (psi_.rows() < 1) throw DimensionError("clique needs at least one vertex");
  if (psi_.cols() < 2) throw DimensionError("clique needs at least two values");
  if (static_cast<int>(psi_.cols()) != potential_.num_values()) {
    throw DimensionError("psi has " + std::to_string(psi_.cols()) + " values, potential has " +
                         std::to_string(potential_.num_values()));
  }
  for (double x : psi_.data()) {
    if (!std::isfinite(x)) throw std::invalid_argument("vertex potentials must be finite");
  }
  if (auto cap = potential_.max_count(); cap && n() > *cap) {
    throw DimensionError("potential tables are shorter than n+1");
  }
}

double CliqueProblem::nonnegative_shift() const {
  const double lo = *std::min_element(psi_.data().begin(), psi_.data().end());
  return lo < 0.0 ? -lo : 0.0;
}

double evaluate_objective(const CliqueProblem& problem, std::span<const ValueId> values) {
  CheckValues(problem, values);
  const CountHistogram hist = histogram_of(values, problem.num_values());
  return ObjectiveUnchecked(problem, values, hist.counts);
}

Assignment make_assignment(const CliqueProblem& problem, std::vector<ValueId> values) {
  const double score = evaluate_objective(problem, values);
  return {std::move(values), score};
}

std::vector<ValueId> vertex_argmax(const CliqueProblem& problem) {
  std::vector<ValueId> values(problem.n(), 0);
  for (int i = 0; i < problem.n(); ++i) {
    for (ValueId v = 1; v < problem.num_values(); ++v) {
      if (problem.psi(i, v) > problem.psi(i, values[i])) values[i] = v;
    }
  }
  return values;
}

void for_each_alpha_sweep(const CliqueProblem& problem, const std::function<void(const SweepState&)>& visit) {
  for (ValueId alpha = 0; alpha < problem.num_values(); ++alpha) {
    const auto set = Singleton(problem.num_values(), alpha);
    const SweepPlan plan = BuildPlan(problem, set);
    RunSweep(problem, plan, set, nullptr, [&](int k, std::span<const ValueId> values, double s) {
      visit(SweepState{alpha, k, values, s});
    });
  }
}

Assignment alpha_pass(const CliqueProblem& problem) {
  if (problem.n() == 1) return SingleVertex(problem, nullptr);
  BestTracker best(problem);
  for (ValueId alpha = 0; alpha < problem.num_values(); ++alpha) {
    const auto set = Singleton(problem.num_values(), alpha);
    RunSweep(problem, BuildPlan(problem, set), set, nullptr,
             [&](int, std::span<const ValueId> values, double s) { best.Offer(values, s); });
  }
  return best.Result();
}

Assignment alpha_pass_pinned(const CliqueProblem& problem, Pin pin) {
  CheckPin(problem, pin);
  if (problem.n() == 1) return SingleVertex(problem, &pin);
  BestTracker best(problem);
  for (ValueId alpha = 0; alpha < problem.num_values(); ++alpha) {
    const auto set = Singleton(problem.num_values(), alpha);
    RunSweep(problem, BuildPlan(problem, set), set, &pin,
             [&](int, std::span<const ValueId> values, double s) { best.Offer(values, s); });
  }
  return best.Result();
}

Table max_marginals(const CliqueProblem& problem) {
  const int n = problem.n();
  const int r = problem.num_values();
  Table out(n, r);
  if (n == 1) {
    for (ValueId v = 0; v < r; ++v) {
      const Pin pin{0, v};
      out(0, v) = SingleVertex(problem, &pin).score;
    }
    return out;
  }
  std::vector<std::vector<char>> sets;
  std::vector<SweepPlan> plans;
  for (ValueId alpha = 0; alpha < r; ++alpha) {
    sets.push_back(Singleton(r, alpha));
    plans.push_back(BuildPlan(problem, sets.back()));
  }
  for (int i = 0; i < n; ++i) {
    for (ValueId v = 0; v < r; ++v) {
      const Pin pin{i, v};
      BestTracker best(problem);
      for (ValueId alpha = 0; alpha < r; ++alpha) {
        RunSweep(problem, plans[alpha], sets[alpha], &pin,
                 [&](int, std::span<const ValueId> values, double s) { best.Offer(values, s); });
      }
      out(i, v) = best.ExactScore();
    }
  }
  return out;
}

Assignment generalized_alpha_pass(const CliqueProblem& problem, int q) {
  const int r = problem.num_values();
  if (q < 1 || q > r) throw std::invalid_argument("q must lie in [1, R]");
  if (problem.n() == 1) return SingleVertex(problem, nullptr);
  BestTracker best(problem);
  std::vector<int> combo;
  for (int size = 1; size <= q; ++size) {
    combo.resize(size);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      std::vector<char> set(r, 0);
      for (int v : combo) set[v] = 1;
      RunSweep(problem, BuildPlan(problem, set), set, nullptr,
               [&](int, std::span<const ValueId> values, double s) { best.Offer(values, s); });
      // Next combination in lexicographic order.
      int pos = size - 1;
      while (pos >= 0 && combo[pos] == r - size + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (int j = pos + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return best.Result();
}

Assignment expansion_move(const CliqueProblem& problem, const Assignment& current, ValueId alpha) {
  const CliquePotential& pot = problem.potential();
  if (pot.family() != PotentialFamily::kAdditive) {
    throw std::invalid_argument("expansion moves need an additive potential, got " + pot.name());
  }
  if (alpha < 0 || alpha >= problem.num_values()) throw RangeError("alpha outside [0, R)");
  CheckValues(problem, current.values);
  const int n = problem.n();
  const int r = problem.num_values();
  const double current_score = evaluate_objective(problem, current.values);

  // Vertices of each non-alpha value, best candidates for switching first.
  std::vector<std::vector<int>> lists(r);
  for (int i = 0; i < n; ++i) lists[current.values[i]].push_back(i);
  double alpha_base = 0.0;
  for (int i : lists[alpha]) alpha_base += problem.psi(i, alpha);
  const int n_alpha = static_cast<int>(lists[alpha].size());

  std::vector<ValueId> others;
  for (ValueId v = 0; v < r; ++v) {
    if (v == alpha) continue;
    others.push_back(v);
    std::stable_sort(lists[v].begin(), lists[v].end(), [&](int a, int b) {
      return problem.psi(a, alpha) - problem.psi(a, v) > problem.psi(b, alpha) - problem.psi(b, v);
    });
  }

  // best[k]: best score of the processed values with k of their vertices switched.
  const int movable = n - n_alpha;
  std::vector<double> best(movable + 1, kNegInf);
  best[0] = 0.0;
  std::vector<std::vector<int>> choice;  // choice[j][k] = vertices taken from others[j]
  int reach = 0;
  for (ValueId v : others) {
    const auto& list = lists[v];
    const int nv = static_cast<int>(list.size());
    // gain[l]: vertex score of the value's vertices when the top l switch.
    std::vector<double> gain(nv + 1, 0.0);
    for (int i : list) gain[0] += problem.psi(i, v);
    for (int l = 1; l <= nv; ++l) {
      const int i = list[l - 1];
      gain[l] = gain[l - 1] + problem.psi(i, alpha) - problem.psi(i, v);
    }
    std::vector<double> next(movable + 1, kNegInf);
    std::vector<int> pick(movable + 1, 0);
    const int new_reach = reach + nv;
    for (int k = 0; k <= new_reach; ++k) {
      for (int l = std::max(0, k - reach); l <= std::min(k, nv); ++l) {
        if (best[k - l] == kNegInf) continue;
        const double s = best[k - l] + pot.Term(v, nv - l) + gain[l];
        if (s > next[k]) {
          next[k] = s;
          pick[k] = l;
        }
      }
    }
    best = std::move(next);
    choice.push_back(std::move(pick));
    reach = new_reach;
  }

  int best_k = 0;
  double best_total = kNegInf;
  for (int k = 0; k <= movable; ++k) {
    if (best[k] == kNegInf) continue;
    const double total = best[k] + pot.Term(alpha, n_alpha + k) + alpha_base;
    if (total > best_total) {
      best_total = total;
      best_k = k;
    }
  }

  std::vector<ValueId> values = current.values;
  int k = best_k;
  for (int j = static_cast<int>(others.size()) - 1; j >= 0; --j) {
    const int l = choice[j][k];
    const auto& list = lists[others[j]];
    for (int t = 0; t < l; ++t) values[list[t]] = alpha;
    k -= l;
  }
  const double score = evaluate_objective(problem, values);
  if (score > current_score) return {std::move(values), score};
  return {current.values, current_score};
}

Assignment alpha_expansion(const CliqueProblem& problem, Assignment init) {
  CheckValues(problem, init.values);
  Assignment cur{std::move(init.values), 0.0};
  cur.score = evaluate_objective(problem, cur.values);
  bool changed = true;
  while (changed) {
    changed = false;
    for (ValueId alpha = 0; alpha < problem.num_values(); ++alpha) {
      Assignment next = expansion_move(problem, cur, alpha);
      if (next.score > cur.score) {
        cur = std::move(next);
        changed = true;
      }
    }
  }
  return cur;
}

Assignment icm(const CliqueProblem& problem, std::optional<Assignment> init) {
  if (problem.n() == 1) return SingleVertex(problem, nullptr);
  std::vector<ValueId> values = init ? init->values : vertex_argmax(problem);
  CheckValues(problem, values);
  std::vector<int> counts = histogram_of(values, problem.num_values()).counts;
  const CliquePotential& pot = problem.potential();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < problem.n(); ++i) {
      const ValueId cur = values[i];
      const double base = pot.EvaluateCounts(counts);
      double best_delta = 0.0;
      ValueId best_v = cur;
      for (ValueId v = 0; v < problem.num_values(); ++v) {
        if (v == cur) continue;
        --counts[cur];
        ++counts[v];
        const double delta = (problem.psi(i, v) - problem.psi(i, cur)) + (pot.EvaluateCounts(counts) - base);
        ++counts[cur];
        --counts[v];
        if (delta > best_delta) {
          best_delta = delta;
          best_v = v;
        }
      }
      if (best_v != cur) {
        --counts[cur];
        ++counts[best_v];
        values[i] = best_v;
        changed = true;
      }
    }
  }
  return make_assignment(problem, std::move(values));
}

bool brute_force_feasible(const CliqueProblem& problem, BruteForceOptions options) {
  return problem.n() * std::log(static_cast<double>(problem.num_values())) <=
         std::log(options.max_states) + 1e-12;
}

Assignment brute_force(const CliqueProblem& problem, BruteForceOptions options) {
  if (!brute_force_feasible(problem, options)) {
    throw SizeError("brute force over R^n = " + std::to_string(problem.num_values()) + "^" +
                    std::to_string(problem.n()) + " states exceeds the cap");
  }
  if (problem.n() == 1) return SingleVertex(problem, nullptr);
  const int n = problem.n();
  const int r = problem.num_values();
  std::vector<ValueId> values(n, 0);
  std::vector<int> counts(r, 0);
  counts[0] = n;
  std::vector<ValueId> best_values = values;
  double best = ObjectiveUnchecked(problem, values, counts);
  while (true) {
    int pos = n - 1;
    while (pos >= 0 && values[pos] == r - 1) {
      --counts[r - 1];
      ++counts[0];
      values[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    --counts[values[pos]];
    ++values[pos];
    ++counts[values[pos]];
    const double s = ObjectiveUnchecked(problem, values, counts);
    if (s > best) {
      best = s;
      best_values = values;
    }
  }
  return {std::move(best_values), best};
}

}  // namespace symclique
