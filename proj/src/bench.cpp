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

#include "symclique/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "symclique/io.hpp"

namespace symclique {
namespace {

std::optional<int> QpassDegree(const std::string& name) {
  if (name.rfind("qpass", 0) != 0 || name.size() == 5) return std::nullopt;
  int q = 0;
  const char* first = name.data() + 5;
  const char* last = name.data() + name.size();
  auto [end, ec] = std::from_chars(first, last, q);
  if (ec != std::errc() || end != last || q < 1) return std::nullopt;
  return q;
}

bool IsMajority(const CliqueProblem& p) { return p.potential().family() == PotentialFamily::kMajority; }

double Ratio(const CliqueProblem& p, double score, double reference) {
  const double den = p.shifted(reference);
  if (den > 0.0) return p.shifted(score) / den;
  return score == reference ? 1.0 : 0.0;
}

bool Close(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b))); }

std::string Fmt(double x) { return format_number(x); }

}  // namespace

bool is_known_solver(const std::string& name) {
  static const char* kNames[] = {"alpha", "expansion", "icm", "lr", "exact", "brute", "modified-alpha"};
  for (const char* k : kNames) {
    if (name == k) return true;
  }
  return QpassDegree(name).has_value();
}

bool solver_applicable(const std::string& solver, const CliqueProblem& problem, const BruteForceOptions& brute) {
  if (!is_known_solver(solver)) return false;
  const auto family = problem.potential().family();
  if (solver == "lr" || solver == "exact" || solver == "modified-alpha") return family == PotentialFamily::kMajority;
  if (solver == "expansion") return family == PotentialFamily::kAdditive;
  if (QpassDegree(solver)) return family != PotentialFamily::kMajority;
  if (solver == "brute") return brute_force_feasible(problem, brute);
  return true;
}

Assignment run_solver(const std::string& solver, const CliqueProblem& problem, const LrConfig& lr,
                      const BruteForceOptions& brute) {
  if (!is_known_solver(solver)) throw std::invalid_argument("unknown solver '" + solver + "'");
  if (!solver_applicable(solver, problem, brute)) {
    throw std::invalid_argument("solver '" + solver + "' does not apply to a " + problem.potential().name() +
                                " potential of this size");
  }
  if (solver == "alpha") return IsMajority(problem) ? modified_alpha_pass(problem) : alpha_pass(problem);
  if (auto q = QpassDegree(solver)) return generalized_alpha_pass(problem, *q);
  if (solver == "expansion") return alpha_expansion(problem, make_assignment(problem, vertex_argmax(problem)));
  if (solver == "icm") return icm(problem);
  if (solver == "lr") return lr_solve(problem, lr).assignment;
  if (solver == "exact") return exact_majority(problem);
  if (solver == "modified-alpha") return modified_alpha_pass(problem);
  return brute_force(problem, brute);
}

std::vector<BenchReportRow> clique_bench(const std::vector<GeneratedProblem>& problems, const BenchOptions& options) {
  for (const auto& s : options.solvers) {
    if (!is_known_solver(s)) throw std::invalid_argument("unknown solver '" + s + "'");
  }
  std::vector<std::string> solvers = options.solvers;
  std::sort(solvers.begin(), solvers.end());
  solvers.erase(std::unique(solvers.begin(), solvers.end()), solvers.end());

  std::vector<std::vector<BenchReportRow>> per_problem(problems.size());
  internal::parallel_for(static_cast<int>(problems.size()), options.threads, [&](int idx) {
    const GeneratedProblem& g = problems[idx];
    const CliqueProblem& p = g.problem;
    auto& rows = per_problem[idx];
    for (const auto& s : solvers) {
      BenchReportRow row;
      row.problem_id = g.id;
      row.seed = g.seed;
      row.family = family_name(g.family);
      row.n = p.n();
      row.r = p.num_values();
      row.lambda = g.lambda;
      row.solver = s;
      if (!solver_applicable(s, p, options.brute)) {
        row.skipped = true;
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        row.score = run_solver(s, p, options.lr, options.brute).score;
        const auto t1 = std::chrono::steady_clock::now();
        row.time_us = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
      }
      rows.push_back(std::move(row));
    }
    std::optional<double> reference;
    std::string kind;
    if (brute_force_feasible(p, options.brute)) {
      const auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.solver == "brute"; });
      reference = it != rows.end() ? it->score : brute_force(p, options.brute).score;
      kind = "brute";
    } else if (IsMajority(p)) {
      const auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.solver == "exact"; });
      reference = it != rows.end() ? it->score : exact_majority(p).score;
      kind = "exact";
    } else {
      for (const auto& r : rows) {
        if (!r.skipped && (!reference || r.score > *reference)) reference = r.score;
      }
      kind = "best";
    }
    for (auto& r : rows) {
      if (r.skipped || !reference) continue;
      r.reference = reference;
      r.reference_kind = kind;
      r.ratio = Ratio(p, r.score, *reference);
    }
  });

  std::vector<BenchReportRow> out;
  for (auto& rows : per_problem) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const BenchReportRow& a, const BenchReportRow& b) {
    return a.problem_id != b.problem_id ? a.problem_id < b.problem_id : a.solver < b.solver;
  });
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchReportRow>& rows, bool timing) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem_id << ',' << r.seed << ',' << r.family << ',' << r.n << ',' << r.r << ',' << Fmt(r.lambda) << ','
        << r.solver << ',' << (r.skipped ? "skipped" : "ok") << ',';
    if (!r.skipped) out << Fmt(r.score);
    out << ',';
    if (r.reference) out << Fmt(*r.reference);
    out << ',' << r.reference_kind << ',';
    if (r.ratio) out << Fmt(*r.ratio);
    out << ',';
    if (timing && !r.skipped) out << r.time_us;
    out << '\n';
  }
}

namespace {

// Returns an empty string when every invariant holds.
std::string CheckOne(const GeneratedProblem& g, const std::string& solver, const BenchOptions& options) {
  const CliqueProblem& p = g.problem;
  const Assignment a = run_solver(solver, p, options.lr, options.brute);
  std::ostringstream why;
  auto fail = [&](const std::string& what) {
    why << "problem " << g.id << " (" << family_name(g.family) << ", n=" << p.n() << ", R=" << p.num_values()
        << "): " << what;
    return why.str();
  };
  if (a.values.size() != static_cast<std::size_t>(p.n())) return fail("assignment length differs from n");
  for (ValueId v : a.values) {
    if (v < 0 || v >= p.num_values()) return fail("value outside [0, R)");
  }
  const double recomputed = evaluate_objective(p, a.values);
  if (!Close(recomputed, a.score)) {
    return fail("reported score " + Fmt(a.score) + " differs from the objective " + Fmt(recomputed));
  }

  std::optional<double> optimum;
  if (brute_force_feasible(p, options.brute)) {
    optimum = brute_force(p, options.brute).score;
  } else if (IsMajority(p)) {
    optimum = exact_majority(p).score;
  }
  if (optimum && a.score > *optimum + 1e-9 * (1.0 + std::abs(*optimum))) {
    return fail("score " + Fmt(a.score) + " exceeds the optimum " + Fmt(*optimum));
  }

  const auto family = p.potential().family();
  const bool potts = std::holds_alternative<Potts>(p.potential().form());
  if (solver == "alpha" && family == PotentialFamily::kMaxLabel && optimum && a.score != *optimum) {
    return fail("alpha score " + Fmt(a.score) + " is not the max-label optimum " + Fmt(*optimum));
  }
  if (solver == "alpha" && potts && optimum && Ratio(p, a.score, *optimum) < 13.0 / 15.0 - 1e-12) {
    return fail("alpha ratio " + Fmt(Ratio(p, a.score, *optimum)) + " below 13/15");
  }
  if (auto q = QpassDegree(solver)) {
    const double alpha = alpha_pass(p).score;
    if (*q == 1 && a.score != alpha) return fail("qpass1 differs from alpha");
    if (a.score < alpha - 1e-9 * (1.0 + std::abs(alpha))) return fail("qpass score below alpha");
    if (*q >= 2 && potts && optimum && Ratio(p, a.score, *optimum) < 8.0 / 9.0 - 1e-12) {
      return fail("qpass ratio " + Fmt(Ratio(p, a.score, *optimum)) + " below 8/9");
    }
  }
  if (solver == "expansion") {
    for (ValueId alpha = 0; alpha < p.num_values(); ++alpha) {
      const double moved = expansion_move(p, a, alpha).score;
      if (moved > a.score + 1e-9 * (1.0 + std::abs(a.score))) {
        return fail("expansion on value " + std::to_string(alpha) + " still improves the result");
      }
    }
  }
  if (solver == "icm") {
    std::vector<ValueId> values = a.values;
    for (int i = 0; i < p.n(); ++i) {
      const ValueId keep = values[i];
      for (ValueId v = 0; v < p.num_values(); ++v) {
        values[i] = v;
        if (evaluate_objective(p, values) > a.score + 1e-9 * (1.0 + std::abs(a.score))) {
          return fail("icm result is not a local optimum at vertex " + std::to_string(i));
        }
      }
      values[i] = keep;
    }
  }
  if (solver == "exact" && optimum && !Close(a.score, *optimum)) {
    return fail("exact score " + Fmt(a.score) + " differs from brute force " + Fmt(*optimum));
  }
  if (solver == "lr") {
    const LrResult lr = lr_solve(p, options.lr);
    const double exact = exact_majority(p).score;
    if (lr.bound < exact - 1e-9 * (1.0 + std::abs(exact))) {
      return fail("lr bound " + Fmt(lr.bound) + " below the exact optimum " + Fmt(exact));
    }
  }
  return {};
}

}  // namespace

OracleCheckResult oracle_check(const std::vector<GeneratedProblem>& problems, const std::string& solver, int trials,
                               const BenchOptions& options) {
  if (!is_known_solver(solver)) throw std::invalid_argument("unknown solver '" + solver + "'");
  const int count = trials <= 0 ? static_cast<int>(problems.size())
                                : std::min<int>(trials, static_cast<int>(problems.size()));
  std::vector<std::string> verdicts(count);
  std::vector<char> applicable(count, 0);
  internal::parallel_for(count, options.threads, [&](int idx) {
    if (!solver_applicable(solver, problems[idx].problem, options.brute)) return;
    applicable[idx] = 1;
    verdicts[idx] = CheckOne(problems[idx], solver, options);
  });
  OracleCheckResult result;
  for (int idx = 0; idx < count; ++idx) {
    if (!applicable[idx]) {
      ++result.skipped;
      continue;
    }
    ++result.checked;
    if (!verdicts[idx].empty()) {
      result.violation = verdicts[idx];
      break;
    }
  }
  return result;
}

namespace {

CollectiveReportRow ReportRow(const CollectiveModel& model, int round, const std::vector<std::vector<int>>& labelings,
                              double objective, std::optional<double> max_delta) {
  CollectiveReportRow row{round, objective, max_delta, std::nullopt, std::nullopt};
  long correct = 0;
  long total = 0;
  for (int i = 0; i < model.num_instances(); ++i) {
    const auto& gold = model.instance(i).gold;
    if (!gold) return row;
    for (std::size_t c = 0; c < gold->size(); ++c) correct += (*gold)[c] == labelings[i][c];
    total += static_cast<long>(gold->size());
  }
  row.correct = correct;
  row.total = total;
  return row;
}

}  // namespace

std::vector<CollectiveReportRow> collective_report(CollectiveModel& model, int rounds) {
  std::vector<std::vector<int>> base;
  for (int i = 0; i < model.num_instances(); ++i) base.push_back(viterbi(model.instance(i)).labels);
  std::vector<CollectiveReportRow> out;
  out.push_back(ReportRow(model, 0, base, model.joint_objective(base), std::nullopt));
  for (const auto& d : model.run(rounds)) out.push_back(ReportRow(model, d.round, d.labelings, d.objective, d.max_delta));
  return out;
}

void write_collective_csv(std::ostream& out, const std::vector<CollectiveReportRow>& rows) {
  out << kCollectiveCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.round << ',' << Fmt(r.objective) << ',';
    if (r.max_delta) out << Fmt(*r.max_delta);
    out << ',';
    if (r.correct) out << *r.correct;
    out << ',';
    if (r.total) out << *r.total;
    out << ',';
    if (r.correct && r.total && *r.total > 0) out << Fmt(static_cast<double>(*r.correct) / *r.total);
    out << '\n';
  }
}

int threads_from_env(int fallback) {
  const char* env = std::getenv("SYMCLIQUE_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  const std::string text(env);
  int threads = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || end != text.data() + text.size() || threads < 1) {
    throw std::invalid_argument("SYMCLIQUE_THREADS must be a positive integer, got '" + text + "'");
  }
  return threads;
}

}  // namespace symclique
