#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "symclique/bench.hpp"
#include "symclique/io.hpp"

using namespace symclique;

namespace {

std::vector<GeneratedProblem> Mixed() {
  std::vector<GeneratedProblem> out;
  int id = 0;
  for (auto f : {CliqueFamily::kPotts, CliqueFamily::kEntropy, CliqueFamily::kMakespan, CliqueFamily::kMakespan2,
                 CliqueFamily::kMajDense, CliqueFamily::kMajSparse}) {
    for (int j = 0; j < 3; ++j) out.push_back(gen_clique_problem(f, 5, 3, 0.9, 100 + id, id)), ++id;
  }
  std::mt19937_64 rng(5);
  const auto f = oracle::RandomMonotone(rng, 3, 5, 1.0);
  const auto psi = oracle::RandomRows(rng, 5, 3, 0.0, 2.0);
  out.push_back({id++, 9, CliqueFamily::kMaxLabelTable, 0.0,
                 CliqueProblem(Table::FromRows(psi), CliquePotential::MakeMaxLabelTables(Table::FromRows(f)))});
  out.push_back({id++, 9, CliqueFamily::kAdditiveTable, 0.0,
                 CliqueProblem(Table::FromRows(psi), CliquePotential::MakeAdditiveTables(Table::FromRows(f)))});
  return out;
}

std::string Text(const std::vector<GeneratedProblem>& problems) {
  std::ostringstream out;
  write_problems(out, problems);
  return out.str();
}

}  // namespace

TEST_CASE("numbers round-trip through their shortest text") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(parse_number("-inf") == kNegInf);
  CHECK_THROWS_AS(parse_number("1,5"), ParseError);
  CHECK_THROWS_AS(parse_number(""), ParseError);
}

TEST_CASE("problem files round-trip every family") {
  const auto problems = Mixed();
  const std::string text = Text(problems);
  std::istringstream in(text);
  const auto back = read_problems(in);
  REQUIRE(back.size() == problems.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CAPTURE(k);
    CHECK(back[k].id == problems[k].id);
    CHECK(back[k].seed == problems[k].seed);
    CHECK(back[k].family == problems[k].family);
    CHECK(back[k].problem.psi() == problems[k].problem.psi());
    CHECK(back[k].problem.potential().name() == problems[k].problem.potential().name());
    oracle::ForEachLabeling(5, 3, [&](const std::vector<int>& y) {
      CHECK(evaluate_objective(back[k].problem, y) == evaluate_objective(problems[k].problem, y));
    });
  }
  CHECK(Text(back) == text);
}

TEST_CASE("problem file errors carry line numbers") {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_problems(in);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(fails("problem 0 1\n2 2 potts 1\n1 2\n").find("line 3") != std::string::npos);
  CHECK(fails("problem 0 1\n2 2 potts 1\n1 2\n3\n").find("line 4") != std::string::npos);
  CHECK(fails("problem 0 1\n2 2 bogus 1\n").find("unknown family") != std::string::npos);
  CHECK(fails("problem x 1\n").find("line 1") != std::string::npos);
  CHECK(fails("problem 0 1\n2 2 maj-dense 1\n1 2\n3 4\nnan 0\n0 0\n") != "");
  CHECK(fails("# comment\n\nproblem 0 1\n1 2 potts 1\n1 2\n").empty());
}

TEST_CASE("instance files round-trip") {
  ChainInstance inst;
  inst.id = "rec7";
  inst.tokens = {"a", "b", "Start"};
  inst.node = Table::FromRows({{0.5, -1}, {1.25, 0}, {0, 3}});
  inst.edge = {Table::FromRows({{0, 1}, {2, 3}}), Table::FromRows({{0.1, 0.2}, {0.3, 0.4}})};
  inst.gold = std::vector<int>{1, 0, 1};
  std::ostringstream out;
  write_instance(out, inst);
  std::istringstream in(out.str());
  const auto back = read_instance(in);
  CHECK(back.id == inst.id);
  CHECK(back.tokens == inst.tokens);
  CHECK(back.node == inst.node);
  CHECK(back.edge == inst.edge);
  CHECK(back.gold == inst.gold);

  inst.gold.reset();
  std::ostringstream no_gold;
  write_instance(no_gold, inst);
  std::istringstream in2(no_gold.str());
  CHECK_FALSE(read_instance(in2).gold.has_value());

  inst.tokens[0] = "two words";
  std::ostringstream bad;
  CHECK_THROWS(write_instance(bad, inst));
  std::istringstream truncated("instance x\nlabels 2\ntokens a b\nnode\n1 2\n3 4\nedge\n1 2\n");
  CHECK_THROWS_AS(read_instance(truncated), ParseError);
}

TEST_CASE("manifests round-trip and reject malformed lines") {
  Manifest m;
  m.labels = {"Title", "Author", "Other"};
  m.other = "Other";
  m.instance_paths = {"a.inst", "b.inst"};
  m.properties = {{PropertyKind::kNextLabel, "Title", {PotentialKind::kPotts, 1.5}},
                  {PropertyKind::kFirstNonOther, "", {PotentialKind::kMajority, 2}}};
  m.options.rounds = 4;
  m.options.restrict = false;
  m.options.solver = CliqueSolver::kExact;
  m.options.damping = 0.25;
  std::ostringstream out;
  write_manifest(out, m);
  std::istringstream in(out.str());
  const auto back = read_manifest(in);
  CHECK(back.labels == m.labels);
  CHECK(back.other == "Other");
  CHECK(back.instance_paths == m.instance_paths);
  REQUIRE(back.properties.size() == 2);
  CHECK(back.properties[0].anchor == "Title");
  CHECK(back.properties[0].potential.lambda == 1.5);
  CHECK(back.properties[1].kind == PropertyKind::kFirstNonOther);
  CHECK(back.properties[1].potential.kind == PotentialKind::kMajority);
  CHECK(back.options.rounds == 4);
  CHECK_FALSE(back.options.restrict);
  CHECK(back.options.solver == CliqueSolver::kExact);
  CHECK(back.options.damping == 0.25);

  for (const char* bad : {"labels A\nproperty anchor=A potential=potts\n", "labels A\nproperty kind=nextlabel\n",
                          "labels A\noption frobnicate=1\n", "labels A\nwhat\n", "other A\n",
                          "labels A\nproperty kind=nextlabel anchor=A potential=potts lambda=x\n"}) {
    std::istringstream bad_in(bad);
    CHECK_THROWS_AS(read_manifest(bad_in), ParseError);
  }
}

TEST_CASE("models load from disk relative to the manifest") {
  CorpusSpec spec;
  spec.num_domains = 1;
  spec.instances_per_domain = 3;
  const Corpus corpus = gen_corpus(spec);
  const auto dir = std::filesystem::temp_directory_path() / "symclique_io_test";
  std::filesystem::create_directories(dir / "inst");
  Manifest m;
  m.labels = corpus.labels.names();
  m.other = "Other";
  for (const auto& inst : corpus.instances) {
    std::ofstream f(dir / "inst" / (inst.id + ".inst"));
    write_instance(f, inst);
    m.instance_paths.push_back("inst/" + inst.id + ".inst");
  }
  m.properties = {{PropertyKind::kNextLabel, "Title", {PotentialKind::kPotts, 1}}};
  {
    std::ofstream f(dir / "m.model");
    write_manifest(f, m);
  }
  const auto loaded = load_model(dir / "m.model");
  REQUIRE(loaded.instances.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(loaded.instances[k].node == corpus.instances[k].node);
    CHECK(loaded.instances[k].gold == corpus.instances[k].gold);
  }
  CHECK(loaded.labels.other() == corpus.labels.other());
  std::filesystem::remove(dir / "inst" / (corpus.instances[1].id + ".inst"));
  CHECK_THROWS_AS(load_model(dir / "m.model"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solver applicability") {
  const auto problems = Mixed();
  const auto& potts = problems[0].problem;
  const auto& makespan = problems[6].problem;
  const auto& maj = problems[12].problem;
  CHECK(solver_applicable("alpha", potts));
  CHECK(solver_applicable("qpass2", potts));
  CHECK(solver_applicable("expansion", potts));
  CHECK_FALSE(solver_applicable("expansion", makespan));
  CHECK_FALSE(solver_applicable("lr", potts));
  CHECK_FALSE(solver_applicable("exact", makespan));
  CHECK(solver_applicable("lr", maj));
  CHECK(solver_applicable("modified-alpha", maj));
  CHECK_FALSE(solver_applicable("qpass2", maj));
  CHECK_FALSE(solver_applicable("qpass", potts));
  CHECK_FALSE(solver_applicable("qpass0", potts));
  CHECK_FALSE(solver_applicable("brute", potts, {10.0}));
  CHECK_THROWS_AS(run_solver("expansion", makespan), std::invalid_argument);
  CHECK_THROWS_AS(run_solver("nope", potts), std::invalid_argument);
  CHECK(run_solver("alpha", maj).score == modified_alpha_pass(maj).score);
}

TEST_CASE("bench rows: references, ratios, skips and ordering") {
  auto problems = Mixed();
  std::reverse(problems.begin(), problems.end());
  BenchOptions opt;
  opt.solvers = {"icm", "alpha", "lr", "brute", "expansion", "exact"};
  const auto rows = clique_bench(problems, opt);
  REQUIRE(rows.size() == problems.size() * 6);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    CHECK((a.problem_id < b.problem_id || (a.problem_id == b.problem_id && a.solver < b.solver)));
  }
  for (const auto& r : rows) {
    CAPTURE(r.problem_id);
    CAPTURE(r.solver);
    const auto& g = *std::find_if(problems.begin(), problems.end(), [&](const auto& p) { return p.id == r.problem_id; });
    const bool maj = g.problem.potential().family() == PotentialFamily::kMajority;
    const bool additive = g.problem.potential().family() == PotentialFamily::kAdditive;
    CHECK(r.skipped == (((r.solver == "lr" || r.solver == "exact") && !maj) || (r.solver == "expansion" && !additive)));
    if (r.skipped) continue;
    REQUIRE(r.reference.has_value());
    CHECK(r.reference_kind == "brute");
    CHECK(*r.reference == brute_force(g.problem).score);
    CHECK(*r.ratio <= 1.0 + 1e-12);
    CHECK(*r.ratio == doctest::Approx(g.problem.shifted(r.score) / g.problem.shifted(*r.reference)));
    if (r.solver == "brute" || r.solver == "exact") CHECK(*r.ratio == doctest::Approx(1.0));
    if (g.family == CliqueFamily::kMakespan && r.solver == "alpha") CHECK(*r.ratio == 1.0);
  }
}

TEST_CASE("bench reference falls back to exact, then best of the run") {
  std::vector<GeneratedProblem> problems = {gen_clique_problem(CliqueFamily::kMajSparse, 30, 8, 1, 3, 0),
                                            gen_clique_problem(CliqueFamily::kPotts, 30, 8, 1, 3, 1)};
  BenchOptions opt;
  opt.solvers = {"alpha", "icm"};
  const auto rows = clique_bench(problems, opt);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].reference_kind == "exact");
  CHECK(*rows[0].reference == exact_majority(problems[0].problem).score);
  CHECK(rows[2].reference_kind == "best");
  CHECK(*rows[2].reference == std::max(rows[2].score, rows[3].score));
}

TEST_CASE("bench csv is deterministic across thread counts") {
  const auto problems = Mixed();
  BenchOptions opt;
  opt.solvers = {"alpha", "qpass2", "icm", "lr", "exact", "brute", "expansion", "modified-alpha"};
  std::ostringstream one;
  write_bench_csv(one, clique_bench(problems, opt), false);
  opt.threads = 3;
  std::ostringstream three;
  write_bench_csv(three, clique_bench(problems, opt), false);
  CHECK(one.str() == three.str());
  CHECK(one.str().rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
  CHECK(one.str().find(",skipped,") != std::string::npos);
}

TEST_CASE("oracle check passes on every solver") {
  const auto problems = Mixed();
  for (const char* s : {"alpha", "qpass1", "qpass2", "expansion", "icm", "exact", "lr", "brute", "modified-alpha"}) {
    CAPTURE(s);
    const auto r = oracle_check(problems, s, 0);
    CHECK(r.ok());
    CHECK(r.checked + r.skipped == static_cast<int>(problems.size()));
    CHECK(r.checked > 0);
  }
  CHECK(oracle_check(problems, "alpha", 4).checked == 4);
  CHECK_THROWS_AS(oracle_check(problems, "nope", 0), std::invalid_argument);

}

TEST_CASE("thread count from the environment") {
  ::unsetenv("SYMCLIQUE_THREADS");
  CHECK(threads_from_env() == 1);
  CHECK(threads_from_env(4) == 4);
  ::setenv("SYMCLIQUE_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  ::setenv("SYMCLIQUE_THREADS", "zero", 1);
  CHECK_THROWS_AS(threads_from_env(), std::invalid_argument);
  ::setenv("SYMCLIQUE_THREADS", "0", 1);
  CHECK_THROWS_AS(threads_from_env(), std::invalid_argument);
  ::unsetenv("SYMCLIQUE_THREADS");
}

TEST_CASE("collective report rows") {
  CorpusSpec spec;
  spec.num_domains = 1;
  spec.instances_per_domain = 6;
  const Corpus corpus = gen_corpus(spec);
  auto model = CollectiveModel::build(corpus.instances, corpus.labels,
                                      {{PropertyKind::kNextLabel, "Title", {PotentialKind::kPotts, 1}}});
  const auto rows = collective_report(model, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].round == 0);
  CHECK_FALSE(rows[0].max_delta.has_value());
  long total = 0;
  for (const auto& inst : corpus.instances) total += inst.length();
  for (const auto& r : rows) {
    REQUIRE(r.total.has_value());
    CHECK(*r.total == total);
  }
  CHECK(*rows[1].correct >= *rows[0].correct);
  std::ostringstream out;
  write_collective_csv(out, rows);
  CHECK(out.str().rfind(std::string(kCollectiveCsvHeader) + "\n0,", 0) == 0);

  auto plain = CollectiveModel::build(corpus.instances, corpus.labels, {});
  const auto base = collective_report(plain, 1);
  CHECK(*base[1].correct == *base[0].correct);
  CHECK(base[1].objective == base[0].objective);
}

TEST_CASE("lr ratio matches or beats modified alpha on most majority rows") {
  for (auto family : {CliqueFamily::kMajDense, CliqueFamily::kMajSparse}) {
    CliqueDatasetSpec spec;
    spec.family = family;
    spec.n = 30;
    spec.r = 8;
    spec.per_lambda = 30;
    spec.seed = 77;
    BenchOptions opt;
    opt.solvers = {"lr", "modified-alpha"};
    const auto rows = clique_bench(gen_clique_dataset(spec), opt);
    REQUIRE(rows.size() == 60);
    int wins = 0;
    for (std::size_t k = 0; k < rows.size(); k += 2) {
      REQUIRE(rows[k].solver == "lr");
      REQUIRE(rows[k + 1].solver == "modified-alpha");
      CHECK(rows[k].reference_kind == "exact");
      wins += *rows[k].ratio >= *rows[k + 1].ratio;
    }
    MESSAGE(family_name(family), ": lr >= modified-alpha on ", wins, "/30");
    CHECK(wins > 15);
  }
}
