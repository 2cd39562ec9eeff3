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

#include "symclique/majority_infer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "best_tracker.hpp"
#include "symclique/min_cost_flow.hpp"

namespace symclique {

using internal::BestTracker;

namespace {

constexpr int kGoldenIterations = 24;

void RequireMajority(const CliqueProblem& problem) {
  if (problem.potential().family() != PotentialFamily::kMajority) {
    throw std::invalid_argument("expected a majority potential, got " + problem.potential().name());
  }
}

// psi(i, v) + w(alpha, v)
double Weighted(const CliqueProblem& problem, int i, ValueId v, ValueId alpha) {
  return problem.psi(i, v) + problem.potential().MajorityWeight(alpha, v);
}

bool Counted(const CliqueProblem& problem, ValueId v) { return !problem.potential().excluded(v); }

Assignment SingleVertex(const CliqueProblem& problem) {
  Assignment best{{0}, kNegInf};
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    const std::vector<ValueId> values{v};
    const double s = evaluate_objective(problem, values);
    if (s > best.score) best = {values, s};
  }
  return best;
}

// Every vertex at its best excluded value; the only assignments without a majority.
std::optional<Assignment> NoMajorityCandidate(const CliqueProblem& problem) {
  if (!problem.potential().has_exclusions()) return std::nullopt;
  std::vector<ValueId> values(problem.n(), -1);
  for (int i = 0; i < problem.n(); ++i) {
    for (ValueId v = 0; v < problem.num_values(); ++v) {
      if (Counted(problem, v)) continue;
      if (values[i] < 0 || problem.psi(i, v) > problem.psi(i, values[i])) values[i] = v;
    }
  }
  return make_assignment(problem, std::move(values));
}

bool AlphaIsMajority(const CliqueProblem& problem, std::span<const int> counts, ValueId alpha) {
  const auto a = problem.potential().MajorityOf(counts);
  return a && *a == alpha;
}

// Best value of vertex i under psi^alpha other than `skip`; alpha wins ties,
// then the lowest id.
ValueId SecondBest(const CliqueProblem& problem, const Multipliers& mult, int i, ValueId skip) {
  ValueId best = -1;
  double best_val = kNegInf;
  auto consider = [&](ValueId v) {
    if (v == skip) return;
    const double val = modified_potential(problem, mult, i, v);
    if (best < 0 || val > best_val) {
      best = v;
      best_val = val;
    }
  };
  consider(mult.alpha);
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    if (v != mult.alpha) consider(v);
  }
  return best;
}

// gamma_v at which vertex i is indifferent between v and beta.
double FlipPoint(const CliqueProblem& problem, const Multipliers& mult, int i, ValueId v, ValueId beta) {
  const ValueId alpha = mult.alpha;
  const double delta = Weighted(problem, i, v, alpha) - Weighted(problem, i, beta, alpha);
  if (beta != alpha) return delta + mult.gamma[beta];
  double others = 0.0;
  for (ValueId u = 0; u < problem.num_values(); ++u) {
    if (u != v) others += mult.gamma[u];
  }
  return 0.5 * (delta - others);
}

std::vector<int> CountsOf(const CliqueProblem& problem, std::span<const ValueId> z) {
  return histogram_of(z, problem.num_values()).counts;
}

double Nudge(double x) { return 1e-9 * (1.0 + std::abs(x)); }

Multipliers ConservativeStep(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                             const Violation& viol) {
  const ValueId v = viol.value;
  const ValueId alpha = mult.alpha;
  Multipliers next = mult;
  int pivot = -1;
  ValueId pivot_beta = -1;
  double target = viol.count_excess ? std::numeric_limits<double>::infinity() : kNegInf;
  for (int i = 0; i < problem.n(); ++i) {
    const bool at_v = z[i] == v;
    if (at_v != viol.count_excess) continue;
    const ValueId beta = at_v ? SecondBest(problem, mult, i, v) : z[i];
    const double point = FlipPoint(problem, mult, i, v, beta);
    if (viol.count_excess ? point < target : point > target) {
      target = point;
      pivot = i;
      pivot_beta = beta;
    }
  }
  if (pivot < 0) return next;
  // At the exact flip point the tie rule of compute_L may keep the pivot in
  // place; step just past it in that case.
  if (viol.count_excess) {
    if (pivot_beta != alpha && pivot_beta > v) target += Nudge(target);
  } else {
    if (pivot_beta == alpha || pivot_beta < v) target -= Nudge(target);
  }
  next.gamma[v] = std::max(0.0, target);
  return next;
}

Multipliers GoldenStep(const CliqueProblem& problem, const Multipliers& mult, const Violation& viol) {
  const ValueId v = viol.value;
  Multipliers trial = mult;
  auto eval = [&](double x) {
    trial.gamma[v] = x;
    return compute_L(problem, trial).value;
  };
  double best_x = mult.gamma[v];
  double best_f = eval(best_x);
  auto keep = [&](double x, double f) {
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  };
  const double ub = std::max(0.0, viol.upper_bound);
  keep(0.0, eval(0.0));
  keep(ub, eval(ub));
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = ub;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  keep(c, fc);
  keep(d, fd);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(c);
      keep(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(d);
      keep(d, fd);
    }
  }
  Multipliers next = mult;
  next.gamma[v] = best_x;
  return next;
}

Multipliers SubgradientStep(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                            double eta) {
  const std::vector<int> counts = CountsOf(problem, z);
  Multipliers next = mult;
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    if (v == mult.alpha || !Counted(problem, v)) continue;
    const double d = counts[v] - counts[mult.alpha];
    next.gamma[v] = std::max(0.0, mult.gamma[v] + eta * d);
  }
  return next;
}

// Moves the cheapest vertices of violating values to alpha until alpha is the majority.
std::vector<ValueId> Repair(const CliqueProblem& problem, std::vector<ValueId> z, ValueId alpha) {
  std::vector<int> counts = CountsOf(problem, z);
  while (!AlphaIsMajority(problem, counts, alpha)) {
    int pick = -1;
    double pick_regret = 0.0;
    for (int i = 0; i < problem.n(); ++i) {
      const ValueId v = z[i];
      if (v == alpha || !Counted(problem, v)) continue;
      const bool violating = counts[v] - counts[alpha] + (v < alpha ? 1 : 0) > 0;
      if (!violating) continue;
      const double regret = Weighted(problem, i, v, alpha) - Weighted(problem, i, alpha, alpha);
      if (pick < 0 || regret < pick_regret) {
        pick = i;
        pick_regret = regret;
      }
    }
    if (pick < 0) {
      // No counted value is present at all; move the cheapest vertex.
      for (int i = 0; i < problem.n(); ++i) {
        if (z[i] == alpha) continue;
        const double regret = Weighted(problem, i, z[i], alpha) - Weighted(problem, i, alpha, alpha);
        if (pick < 0 || regret < pick_regret) {
          pick = i;
          pick_regret = regret;
        }
      }
    }
    --counts[z[pick]];
    ++counts[alpha];
    z[pick] = alpha;
  }
  return z;
}

}  // namespace

std::optional<ValueId> majority_value(const CliqueProblem& problem, std::span<const ValueId> values) {
  RequireMajority(problem);
  return problem.potential().MajorityOf(CountsOf(problem, values));
}

Assignment modified_alpha_pass(const CliqueProblem& problem) {
  RequireMajority(problem);
  if (problem.n() == 1) return SingleVertex(problem);
  const int n = problem.n();
  const int r = problem.num_values();
  BestTracker best(problem);
  if (auto none = NoMajorityCandidate(problem)) best.Offer(none->values, none->score);

  for (ValueId alpha = 0; alpha < r; ++alpha) {
    if (!Counted(problem, alpha)) continue;
    std::vector<ValueId> out(n, -1);
    std::vector<double> metric(n);
    for (int i = 0; i < n; ++i) {
      for (ValueId v = 0; v < r; ++v) {
        if (v == alpha) continue;
        if (out[i] < 0 || Weighted(problem, i, v, alpha) > Weighted(problem, i, out[i], alpha)) out[i] = v;
      }
      metric[i] = Weighted(problem, i, alpha, alpha) - Weighted(problem, i, out[i], alpha);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return metric[a] > metric[b]; });

    std::vector<ValueId> values = out;
    std::vector<int> counts = CountsOf(problem, values);
    double score = 0.0;
    for (int i = 0; i < n; ++i) score += Weighted(problem, i, values[i], alpha);
    for (int k = 1; k <= n; ++k) {
      const int i = order[k - 1];
      score += metric[i];
      --counts[values[i]];
      ++counts[alpha];
      values[i] = alpha;
      if (AlphaIsMajority(problem, counts, alpha)) best.Offer(values, score);
    }
  }
  return best.Result();
}

std::optional<Assignment> exact_majority_subproblem(const CliqueProblem& problem, ValueId alpha, int k) {
  RequireMajority(problem);
  const int n = problem.n();
  const int r = problem.num_values();
  if (alpha < 0 || alpha >= r) throw RangeError("alpha outside [0, R)");
  if (k < 1 || k > n) throw RangeError("k outside [1, n]");
  if (!Counted(problem, alpha)) return std::nullopt;

  double shift = kNegInf;
  for (int i = 0; i < n; ++i) {
    for (ValueId v = 0; v < r; ++v) shift = std::max(shift, Weighted(problem, i, v, alpha));
  }
  const int source = 0;
  const int value_base = n + 1;
  const int pool = n + r + 1;
  const int sink = n + r + 2;
  MinCostFlow flow(n + r + 3);
  std::vector<int> edge(static_cast<std::size_t>(n) * r);
  for (int i = 0; i < n; ++i) {
    flow.AddEdge(source, 1 + i, 1, 0.0);
    for (ValueId v = 0; v < r; ++v) {
      edge[i * r + v] = flow.AddEdge(1 + i, value_base + v, 1, shift - Weighted(problem, i, v, alpha));
    }
  }
  for (ValueId v = 0; v < r; ++v) {
    if (v == alpha) {
      flow.AddEdge(value_base + v, sink, k, 0.0);
    } else if (!Counted(problem, v)) {
      flow.AddEdge(value_base + v, pool, n, 0.0);
    } else {
      // A lower id with the same count would take the majority.
      const int cap = v < alpha ? k - 1 : k;
      if (cap > 0) flow.AddEdge(value_base + v, pool, cap, 0.0);
    }
  }
  flow.AddEdge(pool, sink, n - k, 0.0);
  if (flow.Solve(source, sink, n).flow < n) return std::nullopt;

  std::vector<ValueId> values(n, -1);
  for (int i = 0; i < n; ++i) {
    for (ValueId v = 0; v < r; ++v) {
      if (flow.Flow(edge[i * r + v]) > 0) values[i] = v;
    }
  }
  return make_assignment(problem, std::move(values));
}

namespace {

// Improves `best` with every (alpha, k) subproblem whose relaxed bound can
// still beat it. The bound puts the top-k vertices at alpha and everyone
// else at their best other value with no capacity limits.
void BestForAlpha(const CliqueProblem& problem, ValueId alpha, std::optional<Assignment>& best) {
  if (!Counted(problem, alpha)) return;
  const int n = problem.n();
  const int r = problem.num_values();
  double base = 0.0;
  std::vector<double> metric(n);
  for (int i = 0; i < n; ++i) {
    double other = kNegInf;
    for (ValueId v = 0; v < r; ++v) {
      if (v != alpha) other = std::max(other, Weighted(problem, i, v, alpha));
    }
    base += other;
    metric[i] = Weighted(problem, i, alpha, alpha) - other;
  }
  std::sort(metric.begin(), metric.end(), std::greater<>());
  double prefix = 0.0;
  for (int k = 1; k <= n; ++k) {
    prefix += metric[k - 1];
    if (best && base + prefix < best->score - 1e-9 * (1.0 + std::abs(best->score))) continue;
    auto candidate = exact_majority_subproblem(problem, alpha, k);
    if (candidate && (!best || candidate->score > best->score)) best = std::move(*candidate);
  }
}

}  // namespace

std::optional<Assignment> exact_majority_for(const CliqueProblem& problem, ValueId alpha) {
  RequireMajority(problem);
  if (alpha < 0 || alpha >= problem.num_values()) throw RangeError("alpha outside [0, R)");
  std::optional<Assignment> best;
  BestForAlpha(problem, alpha, best);
  return best;
}

Assignment exact_majority(const CliqueProblem& problem) {
  RequireMajority(problem);
  if (problem.n() == 1) return SingleVertex(problem);
  std::optional<Assignment> best = modified_alpha_pass(problem);
  for (ValueId alpha = 0; alpha < problem.num_values(); ++alpha) BestForAlpha(problem, alpha, best);
  return std::move(*best);
}

double modified_potential(const CliqueProblem& problem, const Multipliers& mult, int i, ValueId v) {
  double val = Weighted(problem, i, v, mult.alpha) - mult.gamma[v];
  if (v == mult.alpha) val += std::accumulate(mult.gamma.begin(), mult.gamma.end(), 0.0);
  return val;
}

LagrangianValue compute_L(const CliqueProblem& problem, const Multipliers& mult) {
  RequireMajority(problem);
  const int r = problem.num_values();
  if (static_cast<int>(mult.gamma.size()) != r) throw DimensionError("gamma must have R entries");
  if (mult.alpha < 0 || mult.alpha >= r) throw RangeError("alpha outside [0, R)");
  for (double g : mult.gamma) {
    if (!(g >= 0.0)) throw std::invalid_argument("multipliers must be non-negative");
  }
  LagrangianValue out;
  out.z.resize(problem.n());
  for (int i = 0; i < problem.n(); ++i) {
    ValueId best = mult.alpha;
    double best_val = modified_potential(problem, mult, i, mult.alpha);
    for (ValueId v = 0; v < r; ++v) {
      if (v == mult.alpha) continue;
      const double val = modified_potential(problem, mult, i, v);
      if (val > best_val) {
        best = v;
        best_val = val;
      }
    }
    out.z[i] = best;
    out.value += best_val;
  }
  return out;
}

Violation worst_violator(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                         double tolerance) {
  RequireMajority(problem);
  const ValueId alpha = mult.alpha;
  const std::vector<int> counts = CountsOf(problem, z);
  Violation worst;
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    if (v == alpha || !Counted(problem, v)) continue;
    const int excess = counts[v] - counts[alpha] + (v < alpha ? 1 : 0);
    if (excess > 0 && excess > worst.magnitude) {
      worst = {v, true, static_cast<double>(excess), 0.0};
    }
  }
  if (worst.value >= 0) {
    double ub = 0.0;
    for (int i = 0; i < problem.n(); ++i) {
      if (z[i] != worst.value) continue;
      ub = std::max(ub, FlipPoint(problem, mult, i, worst.value, SecondBest(problem, mult, i, worst.value)));
    }
    worst.upper_bound = ub;
    return worst;
  }
  for (ValueId v = 0; v < problem.num_values(); ++v) {
    if (v == alpha || !Counted(problem, v) || mult.gamma[v] <= 0.0) continue;
    const double slack = std::abs(mult.gamma[v] * (counts[v] - counts[alpha]));
    if (slack > tolerance * mult.gamma[v] && slack > worst.magnitude) {
      worst = {v, false, slack, mult.gamma[v]};
    }
  }
  return worst;
}

Multipliers update_gamma(const CliqueProblem& problem, const Multipliers& mult, std::span<const ValueId> z,
                         const LrConfig& config, int iteration) {
  RequireMajority(problem);
  if (config.strategy == LrStrategy::kSubgradient) {
    return SubgradientStep(problem, mult, z, config.subgradient_step / (1.0 + iteration));
  }
  const Violation viol = worst_violator(problem, mult, z, config.tolerance);
  if (viol.value < 0) return mult;
  if (config.strategy == LrStrategy::kGolden) return GoldenStep(problem, mult, viol);
  return ConservativeStep(problem, mult, z, viol);
}

LrResult lr_solve(const CliqueProblem& problem, const LrConfig& config) {
  RequireMajority(problem);
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  LrResult result;
  if (problem.n() == 1) {
    result.assignment = SingleVertex(problem);
    result.bound = result.assignment.score;
    result.converged = true;
    return result;
  }
  const int n = problem.n();
  const int r = problem.num_values();
  BestTracker best(problem);
  result.bound = kNegInf;
  result.converged = true;
  if (auto none = NoMajorityCandidate(problem)) {
    best.Offer(none->values, none->score);
    result.bound = none->score;
  }

  for (ValueId alpha = 0; alpha < r; ++alpha) {
    if (!Counted(problem, alpha)) continue;
    const std::vector<ValueId> all_alpha(n, alpha);
    best.Offer(all_alpha, evaluate_objective(problem, all_alpha));

    Multipliers mult{std::vector<double>(r, 0.0), alpha};
    double min_l = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::vector<ValueId> last_z;
    for (int iter = 0; iter < config.max_iters; ++iter) {
      LagrangianValue lv = compute_L(problem, mult);
      min_l = std::min(min_l, lv.value);
      ++result.iterations;
      if (AlphaIsMajority(problem, CountsOf(problem, lv.z), alpha)) {
        best.Offer(lv.z, evaluate_objective(problem, lv.z));
      }
      const Violation viol = worst_violator(problem, mult, lv.z, config.tolerance);
      if (config.record_trace) {
        result.trace.push_back({alpha, iter, lv.value, viol.value, viol.magnitude});
      }
      last_z = std::move(lv.z);
      if (viol.value < 0) {
        converged = true;
        break;
      }
      Multipliers next = update_gamma(problem, mult, last_z, config, iter);
      if (next.gamma == mult.gamma) break;
      mult = std::move(next);
    }
    if (!AlphaIsMajority(problem, CountsOf(problem, last_z), alpha)) {
      const std::vector<ValueId> repaired = Repair(problem, last_z, alpha);
      best.Offer(repaired, evaluate_objective(problem, repaired));
    }
    result.converged = result.converged && converged;
    result.bound = std::max(result.bound, min_l);
  }
  result.assignment = best.Result();
  return result;
}

}  // namespace symclique
