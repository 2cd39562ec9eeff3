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

#ifndef SYMCLIQUE_BENCH_HPP_
#define SYMCLIQUE_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symclique/clique_infer.hpp"
#include "symclique/cluster_graph.hpp"
#include "symclique/majority_infer.hpp"
#include "symclique/synthgen.hpp"

namespace symclique {

// Solver names: alpha, qpass<q>, expansion, icm, lr, exact, brute, modified-alpha.
bool is_known_solver(const std::string& name);
// Whether `solver` runs on this potential (exact, lr and modified-alpha need a
// majority potential; expansion an additive one; brute a feasible size).
bool solver_applicable(const std::string& solver, const CliqueProblem& problem, const BruteForceOptions& brute = {});
// Throws std::invalid_argument for unknown or inapplicable solvers. `alpha`
// on a majority potential runs modified_alpha_pass.
Assignment run_solver(const std::string& solver, const CliqueProblem& problem, const LrConfig& lr = {},
                      const BruteForceOptions& brute = {});

struct BenchReportRow {
  int problem_id = 0;
  std::uint64_t seed = 0;
  std::string family;
  int n = 0;
  int r = 0;
  double lambda = 0.0;
  std::string solver;
  bool skipped = false;
  double score = 0.0;
  std::optional<double> reference;
  std::string reference_kind;  // brute, exact or best
  // shifted(score) / shifted(reference) on the non-negative psi scale.
  std::optional<double> ratio;
  std::int64_t time_us = 0;
};

struct BenchOptions {
  std::vector<std::string> solvers;
  int threads = 1;
  LrConfig lr;
  BruteForceOptions brute;
};

// Rows sorted by (problem id, solver name).
std::vector<BenchReportRow> clique_bench(const std::vector<GeneratedProblem>& problems, const BenchOptions& options);

inline constexpr const char* kBenchCsvHeader =
    "problem_id,seed,family,n,r,lambda,solver,status,score,reference,reference_kind,ratio,time_us";
// time_us is the only non-deterministic column; `timing = false` leaves it empty.
void write_bench_csv(std::ostream& out, const std::vector<BenchReportRow>& rows, bool timing = true);

struct OracleCheckResult {
  int checked = 0;
  int skipped = 0;
  // Empty on success, otherwise the first violated invariant.
  std::string violation;
  bool ok() const { return violation.empty(); }
};

// Runs the invariant suite of `solver` on the first `trials` problems (all when
// trials <= 0). Throws std::invalid_argument for an unknown solver.
OracleCheckResult oracle_check(const std::vector<GeneratedProblem>& problems, const std::string& solver, int trials,
                               const BenchOptions& options = {});

struct CollectiveReportRow {
  int round = 0;  // 0: independent Viterbi
  double objective = 0.0;
  std::optional<double> max_delta;
  std::optional<long> correct;
  std::optional<long> total;
};

// Round 0 followed by one row per message round.
std::vector<CollectiveReportRow> collective_report(CollectiveModel& model, int rounds);

inline constexpr const char* kCollectiveCsvHeader = "round,objective,max_delta,correct,total,accuracy";
void write_collective_csv(std::ostream& out, const std::vector<CollectiveReportRow>& rows);

// SYMCLIQUE_THREADS, or `fallback` when unset. Throws std::invalid_argument on
// a value that is not a positive integer.
int threads_from_env(int fallback = 1);

}  // namespace symclique

#endif  // SYMCLIQUE_BENCH_HPP_
