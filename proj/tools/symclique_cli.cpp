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

// symclique command-line front end. Exit codes: 0 success, 1 invariant
// violation, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symclique/bench.hpp"
#include "symclique/cluster_graph.hpp"
#include "symclique/io.hpp"
#include "symclique/synthgen.hpp"

namespace fs = std::filesystem;
using namespace symclique;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

// Callers build the full text first, so a failed run writes nothing.
void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("write failed for " + path);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct GenArgs {
  std::string family = "potts";
  int n = 100;
  int r = 24;
  std::string lambda = "1";
  bool open_upper = false;
  int per_lambda = 25;
  std::uint64_t seed = 1;
  bool conll = false;
  std::string out = "-";
};

int RunGen(const GenArgs& a) {
  CliqueDatasetSpec spec;
  spec.family = parse_family(a.family);
  spec.n = a.n;
  spec.r = a.r;
  spec.lambdas = LambdaSweep::Parse(a.lambda, a.open_upper);
  spec.per_lambda = a.per_lambda;
  spec.seed = a.seed;
  spec.conll_scaling = a.conll;
  std::ostringstream text;
  write_problems(text, gen_clique_dataset(spec));
  WriteOutput(a.out, text.str());
  return kOk;
}

struct CorpusArgs {
  std::string out;
  CorpusSpec spec;
  double lambda = 1.0;
  std::string potential = "potts";
  int rounds = 3;
};

int RunGenCorpus(const CorpusArgs& a) {
  const Corpus corpus = gen_corpus(a.spec);
  const fs::path root(a.out);
  fs::create_directories(root);
  std::vector<Manifest> manifests(a.spec.num_domains);
  for (std::size_t k = 0; k < corpus.instances.size(); ++k) {
    const auto& inst = corpus.instances[k];
    const std::string dir = "domain" + std::to_string(corpus.domain[k]);
    fs::create_directories(root / dir);
    std::ostringstream text;
    write_instance(text, inst);
    WriteOutput((root / dir / (inst.id + ".inst")).string(), text.str());
    manifests[corpus.domain[k]].instance_paths.push_back(dir + "/" + inst.id + ".inst");
  }
  const PotentialSpec pot{parse_potential_kind(a.potential), a.lambda};
  for (int d = 0; d < a.spec.num_domains; ++d) {
    Manifest& m = manifests[d];
    m.labels = corpus.labels.names();
    m.other = corpus.labels.name(corpus.labels.other());
    m.properties = {{PropertyKind::kNextLabel, "Title", pot}, {PropertyKind::kFirstNonOther, "", pot}};
    m.options.rounds = a.rounds;
    std::ostringstream text;
    write_manifest(text, m);
    WriteOutput((root / ("domain" + std::to_string(d) + ".model")).string(), text.str());
  }
  std::cerr << "wrote " << corpus.instances.size() << " instances in " << a.spec.num_domains << " domains to "
            << root.string() << "\n";
  return kOk;
}

struct BenchArgs {
  std::string in;
  std::string solvers = "alpha,qpass2,expansion,icm,lr,exact,brute";
  std::string out = "-";
  bool no_timing = false;
  double max_states = 2e6;
};

int RunBench(const BenchArgs& a) {
  BenchOptions opt;
  opt.solvers = SplitList(a.solvers);
  if (opt.solvers.empty()) throw std::invalid_argument("--solvers is empty");
  for (const auto& s : opt.solvers) {
    if (!is_known_solver(s)) throw std::invalid_argument("unknown solver '" + s + "'");
  }
  opt.threads = threads_from_env();
  opt.brute.max_states = a.max_states;
  const auto rows = clique_bench(read_problems_file(a.in), opt);
  std::ostringstream text;
  write_bench_csv(text, rows, !a.no_timing);
  WriteOutput(a.out, text.str());
  return kOk;
}

struct CollectiveArgs {
  std::string model;
  int rounds = 0;
  std::string out = "-";
};

int RunCollective(const CollectiveArgs& a) {
  LoadedModel loaded = load_model(a.model);
  CollectiveOptions options = loaded.manifest.options;
  options.threads = threads_from_env(options.threads);
  CollectiveModel model =
      CollectiveModel::build(std::move(loaded.instances), loaded.labels, loaded.manifest.properties, options);
  const auto rows = collective_report(model, a.rounds);
  std::ostringstream text;
  write_collective_csv(text, rows);
  WriteOutput(a.out, text.str());
  return kOk;
}

struct OracleArgs {
  std::string in;
  std::string solver = "alpha";
  int trials = 0;
  double max_states = 2e6;
};

int RunOracle(const OracleArgs& a) {
  BenchOptions opt;
  opt.threads = threads_from_env();
  opt.brute.max_states = a.max_states;
  const auto result = oracle_check(read_problems_file(a.in), a.solver, a.trials, opt);
  if (!result.ok()) {
    std::cerr << "violation: " << result.violation << "\n";
    return kViolation;
  }
  std::cout << "ok: " << result.checked << " problems checked, " << result.skipped << " skipped\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symclique: clique inference, property-aware chain messages and collective labeling"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic clique dataset in the problem file format");
  gen_cmd->add_option("--family", gen.family, "potts, entropy, makespan, makespan2, maj-dense, maj-sparse")
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Vertices per clique")->capture_default_str();
  gen_cmd->add_option("--r", gen.r, "Values per clique")->capture_default_str();
  gen_cmd->add_option("--lambda", gen.lambda, "Sweep a:b:step or a single value")->capture_default_str();
  gen_cmd->add_flag("--open-upper", gen.open_upper, "Exclude the sweep's upper end");
  gen_cmd->add_option("--per-lambda", gen.per_lambda, "Problems per lambda")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Base seed")->capture_default_str();
  gen_cmd->add_flag("--conll", gen.conll, "Replace every lambda by 0.9/n");
  gen_cmd->add_option("--out", gen.out, "Output file, '-' for stdout")->capture_default_str();

  CorpusArgs corpus;
  auto* corpus_cmd = app.add_subcommand(
      "gen-corpus", "Generate a planted-template citation corpus: one instance file per record and one model per domain");
  corpus_cmd->add_option("--out", corpus.out, "Output directory")->required();
  corpus_cmd->add_option("--domains", corpus.spec.num_domains, "Number of domains")->capture_default_str();
  corpus_cmd->add_option("--per-domain", corpus.spec.instances_per_domain, "Instances per domain")
      ->capture_default_str();
  corpus_cmd->add_option("--noise", corpus.spec.noise, "Node potential noise")->capture_default_str();
  corpus_cmd->add_option("--ambiguous", corpus.spec.ambiguous_fraction, "Share of ambiguous instances")
      ->capture_default_str();
  corpus_cmd->add_option("--margin", corpus.spec.margin, "Preference margin of the wrong field")->capture_default_str();
  corpus_cmd->add_option("--seed", corpus.spec.seed, "Base seed")->capture_default_str();
  corpus_cmd->add_option("--potential", corpus.potential, "Property clique potential")->capture_default_str();
  corpus_cmd->add_option("--lambda", corpus.lambda, "Property clique potential scale")->capture_default_str();
  corpus_cmd->add_option("--rounds", corpus.rounds, "Rounds recorded in each model")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("clique-bench", "Run clique solvers and write one CSV row per (problem, solver)");
  bench_cmd->add_option("--in", bench.in, "Problem file")->required();
  bench_cmd->add_option("--solvers", bench.solvers,
                        "Comma list of alpha, qpass<q>, expansion, icm, lr, exact, brute, modified-alpha")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file, '-' for stdout")->capture_default_str();
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Leave the time_us column empty");
  bench_cmd->add_option("--max-states", bench.max_states, "Brute-force state budget")->capture_default_str();
  bench_cmd->footer(std::string("CSV columns: ") + kBenchCsvHeader +
                    "\n  ratio is score/reference after shifting psi to be non-negative;"
                    "\n  reference_kind is brute, exact (majority) or best (best of the run);"
                    "\n  rows are sorted by problem_id, then solver. SYMCLIQUE_THREADS sets the worker count.");

  CollectiveArgs coll;
  auto* coll_cmd = app.add_subcommand("collective", "Run cluster-graph message passing on a collective model");
  coll_cmd->add_option("--model", coll.model, "Model manifest")->required();
  coll_cmd->add_option("--rounds", coll.rounds, "Rounds; 0 uses the manifest's value")->capture_default_str();
  coll_cmd->add_option("--out", coll.out, "CSV file, '-' for stdout")->capture_default_str();
  coll_cmd->footer(std::string("CSV columns: ") + kCollectiveCsvHeader +
                   "\n  round 0 is independent Viterbi; token counts are empty without gold labels.");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Check a solver's invariants against exact references");
  oracle_cmd->add_option("--in", oracle.in, "Problem file")->required();
  oracle_cmd->add_option("--solver", oracle.solver, "Solver name")->capture_default_str();
  oracle_cmd->add_option("--trials", oracle.trials, "Problems to check; 0 checks all")->capture_default_str();
  oracle_cmd->add_option("--max-states", oracle.max_states, "Brute-force state budget")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*gen_cmd) return RunGen(gen);
    if (*corpus_cmd) return RunGenCorpus(corpus);
    if (*bench_cmd) return RunBench(bench);
    if (*coll_cmd) return RunCollective(coll);
    if (*oracle_cmd) return RunOracle(oracle);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
