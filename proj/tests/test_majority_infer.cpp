#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symclique/majority_infer.hpp"

using namespace symclique;

namespace {

CliqueProblem Make(const oracle::Rows& psi, const oracle::Rows& w) {
  return CliqueProblem(Table::FromRows(psi), CliquePotential::MakeMajority(Table::FromRows(w)));
}

oracle::Rows Zeros(int r) { return oracle::Rows(r, std::vector<double>(r, 0.0)); }

std::vector<ValueId> V(std::initializer_list<int> xs) { return std::vector<ValueId>(xs); }

int MajorityOf(const std::vector<int>& counts) {
  int a = 0;
  for (std::size_t v = 1; v < counts.size(); ++v) {
    if (counts[v] > counts[a]) a = static_cast<int>(v);
  }
  return a;
}

const oracle::Rows kLpPsi = {{1, 4, 0}, {4, 0, 4}, {3, 4, 0}};

}  // namespace

TEST_CASE("majority value follows the lowest-id tie rule") {
  const auto p = Make({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, Zeros(3));
  CHECK(majority_value(p, V({2, 2, 1, 1})) == 1);
  CHECK(majority_value(p, V({2, 2, 2, 1})) == 2);
  const auto potts = CliqueProblem(Table(2, 2), CliquePotential::MakePotts(2, 1.0));
  CHECK_THROWS_AS(majority_value(potts, V({0, 1})), std::invalid_argument);
}

TEST_CASE("modified alpha pass") {
  // W = 0: only majority-feasible sweep states survive.
  const auto p = Make(kLpPsi, Zeros(3));
  const auto a = modified_alpha_pass(p);
  CHECK(majority_value(p, a.values).has_value());
  CHECK(a.score == doctest::Approx(oracle::Objective(kLpPsi, [](const oracle::Counts&) { return 0.0; }, a.values)));

  const auto single = Make({{1, 2}}, {{5, 0}, {0, 1}});
  CHECK(modified_alpha_pass(single).values == V({0}));

  // Zero psi, w(beta, gamma) = M + eps, w(beta, v) = M otherwise.
  const int n = 8;
  const int r = 5;
  const double m = 1.0;
  const double eps = 0.1;
  oracle::Rows w = Zeros(r);
  for (int v = 2; v < r; ++v) w[0][v] = m;
  w[0][1] = m + eps;
  const auto ce = Make(oracle::Rows(n, std::vector<double>(r, 0.0)), w);
  const auto mod = modified_alpha_pass(ce);
  CHECK(mod.score == doctest::Approx((m + eps) * n / 2));
  const auto ex = exact_majority(ce);
  CHECK(ex.score == doctest::Approx(6.2));
  CHECK(mod.score < ex.score);
}

TEST_CASE("exact subproblem on the LP counterexample") {
  const auto p = Make(kLpPsi, Zeros(3));
  double best = -1e300;
  std::vector<ValueId> best_values;
  for (int k = 1; k <= 3; ++k) {
    if (auto s = exact_majority_subproblem(p, 0, k); s && s->score > best) {
      best = s->score;
      best_values = s->values;
    }
  }
  // (1,0,0) and (1,2,0) both score 11 with majority 0.
  CHECK(best == 11.0);
  CHECK(majority_value(p, best_values) == 0);
  CHECK(evaluate_objective(p, V({1, 0, 0})) == 11.0);
  const auto given = exact_majority_for(p, 0);
  REQUIRE(given.has_value());
  CHECK(given->score == 11.0);
  CHECK(majority_value(p, given->values) == 0);
  // Without fixing the majority, (1,0,1) scores 12 with majority 1.
  const auto full = exact_majority(p);
  CHECK(full.score == 12.0);
  CHECK(majority_value(p, full.values) == 1);

  const auto all = exact_majority_subproblem(p, 2, 3);
  REQUIRE(all.has_value());
  CHECK(all->values == V({2, 2, 2}));
  CHECK(all->score == 4.0);
  CHECK_THROWS_AS(exact_majority_subproblem(p, 0, 0), RangeError);
  // Two vertices cannot both dodge value 1 when it must hold one of three and
  // value 0 needs a strict lead: k=1 for alpha=1 leaves 0 and 2 at most 0 and 1.
  CHECK_FALSE(exact_majority_subproblem(Make({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, Zeros(3)), 1, 1).has_value());
}

TEST_CASE("exact subproblem matches restricted enumeration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4;
    const int r = 3;
    const auto psi = oracle::RandomRows(rng, n, r, 0, 2);
    const auto w = oracle::RandomRows(rng, r, r, -1, 1);
    const auto p = Make(psi, w);
    const oracle::CliqueFn fn = [&](const oracle::Counts& c) { return oracle::Majority(w, c); };
    for (ValueId alpha = 0; alpha < r; ++alpha) {
      for (int k = 1; k <= n; ++k) {
        const auto ref = oracle::Enumerate(psi, fn, [&](const std::vector<int>& y) {
          const auto c = oracle::CountsOf(y, r);
          return c[alpha] == k && MajorityOf(c) == alpha;
        });
        const auto got = exact_majority_subproblem(p, alpha, k);
        CHECK(got.has_value() == (ref.score > -1e300));
        if (got) {
          CHECK(got->score == doctest::Approx(ref.score).epsilon(1e-12));
          const auto c = oracle::CountsOf(std::vector<int>(got->values.begin(), got->values.end()), r);
          CHECK(c[alpha] == k);
          CHECK(MajorityOf(c) == alpha);
        }
      }
    }
  }
}

TEST_CASE("exact majority matches brute force") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + trial % 7;
    const int r = 2 + trial % 2;
    const auto psi = oracle::RandomRows(rng, n, r, 0, 2);
    const auto w = oracle::RandomRows(rng, r, r, -1, 2);
    const oracle::CliqueFn fn = [&](const oracle::Counts& c) { return oracle::Majority(w, c); };
    CHECK(exact_majority(Make(psi, w)).score == doctest::Approx(oracle::Enumerate(psi, fn).score).epsilon(1e-12));
  }
}

TEST_CASE("exclusions: excluded values never vote") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    const int r = 4;
    const auto psi = oracle::RandomRows(rng, n, r, 0, 2);
    const auto w = oracle::RandomRows(rng, r, r, -1, 2);
    const std::vector<bool> mask = {true, true, false, false};
    const CliqueProblem p(Table::FromRows(psi),
                          CliquePotential::MakeMajority(Table::FromRows(w)).WithExcluded(mask));
    const oracle::CliqueFn fn = [&](const oracle::Counts& c) { return oracle::Majority(w, c, mask); };
    const double ref = oracle::Enumerate(psi, fn).score;
    CHECK(exact_majority(p).score == doctest::Approx(ref).epsilon(1e-12));
    const auto lr = lr_solve(p);
    CHECK(lr.bound >= ref - 1e-9);
    CHECK(lr.assignment.score <= ref + 1e-9);
    CHECK(modified_alpha_pass(p).score <= ref + 1e-9);
  }
}

TEST_CASE("compute_L") {
  const auto p = Make({{0, 5}, {0, 5}}, Zeros(2));
  auto l = compute_L(p, {{0, 0}, 0});
  CHECK(l.value == 10.0);
  CHECK(l.z == V({1, 1}));
  l = compute_L(p, {{0, 2.5}, 0});
  CHECK(l.value == 5.0);
  CHECK(l.z == V({0, 0}));
  CHECK_THROWS(compute_L(p, {{0, -1}, 0}));

  // gamma = 0 gives the row maxima of psi + w(alpha, .).
  const auto q = Make(kLpPsi, {{1, 0, 2}, {0, 0, 0}, {3, 1, 0}});
  CHECK(compute_L(q, {{0, 0, 0}, 0}).value == 4 + 6 + 4);
}

TEST_CASE("L bounds every alpha-majority assignment") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5;
    const int r = 3;
    const auto psi = oracle::RandomRows(rng, n, r, 0, 2);
    const auto w = oracle::RandomRows(rng, r, r, -1, 1);
    const auto p = Make(psi, w);
    const oracle::CliqueFn fn = [&](const oracle::Counts& c) { return oracle::Majority(w, c); };
    for (ValueId alpha = 0; alpha < r; ++alpha) {
      const auto ref = oracle::Enumerate(psi, fn, [&](const std::vector<int>& y) {
        return MajorityOf(oracle::CountsOf(y, r)) == alpha;
      });
      Multipliers mult{{0, 0, 0}, alpha};
      LrConfig config;
      for (int iter = 0; iter < 20; ++iter) {
        const auto lv = compute_L(p, mult);
        CHECK(lv.value >= ref.score - 1e-9);
        mult = update_gamma(p, mult, lv.z, config, iter);
      }
    }
  }
}

TEST_CASE("multiplier updates") {
  const auto p = Make({{0, 5}, {0, 5}}, Zeros(2));
  LrConfig config;
  const auto viol = worst_violator(p, {{0, 0}, 0}, V({1, 1}), config.tolerance);
  CHECK(viol.value == 1);
  CHECK(viol.count_excess);
  CHECK(viol.upper_bound == 2.5);
  const auto cons = update_gamma(p, {{0, 0}, 0}, V({1, 1}), config, 0);
  CHECK(cons.gamma[1] == 2.5);
  CHECK(cons.gamma[0] == 0.0);

  // Conservative step leaves the pivot vertex no longer strictly at its old value.
  CHECK(compute_L(p, cons).z == V({0, 0}));

  const auto none = worst_violator(p, {{0, 0}, 1}, V({1, 1}), config.tolerance);
  CHECK(none.value == -1);
  CHECK(update_gamma(p, {{0, 0}, 1}, V({1, 1}), config, 0).gamma == std::vector<double>{0, 0});

  config.strategy = LrStrategy::kSubgradient;
  const auto sub = update_gamma(p, {{0, 0}, 0}, V({1, 1}), config, 1);  // eta = 1/2, d = 2
  CHECK(sub.gamma[1] == 1.0);

  config.strategy = LrStrategy::kGolden;
  const auto gold = update_gamma(p, {{0, 0}, 0}, V({1, 1}), config, 0);
  CHECK(compute_L(p, gold).value <= compute_L(p, {{0, 0}, 0}).value);
  CHECK(gold.gamma[1] <= 2.5 + 1e-12);
}

TEST_CASE("conservative step local effect on random instances") {
  std::mt19937_64 rng(59);
  LrConfig config;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 6;
    const int r = 3;
    const auto p = Make(oracle::RandomRows(rng, n, r, 0, 2), oracle::RandomRows(rng, r, r, 0, 1));
    Multipliers mult{{0, 0, 0}, static_cast<ValueId>(trial % r)};
    const auto lv = compute_L(p, mult);
    const auto viol = worst_violator(p, mult, lv.z, config.tolerance);
    if (viol.value < 0 || !viol.count_excess) continue;
    const auto next = update_gamma(p, mult, lv.z, config, 0);
    // Some vertex formerly at the violator no longer strictly prefers it.
    bool moved = false;
    for (int i = 0; i < n; ++i) {
      if (lv.z[i] != viol.value) continue;
      const double at = modified_potential(p, next, i, viol.value);
      for (ValueId u = 0; u < r; ++u) {
        if (u != viol.value && modified_potential(p, next, i, u) >= at - 1e-9) moved = true;
      }
    }
    CHECK(moved);
  }
}

TEST_CASE("lr_solve") {
  // Oscillating two-vertex example: alpha = 1 is feasible at gamma = 0.
  const auto p = Make({{0, 5}, {0, 5}}, Zeros(2));
  for (auto strategy : {LrStrategy::kConservative, LrStrategy::kGolden, LrStrategy::kSubgradient}) {
    LrConfig config;
    config.strategy = strategy;
    config.record_trace = true;
    const auto res = lr_solve(p, config);
    CHECK(res.assignment.score >= 5.0);
    CHECK(res.bound >= res.assignment.score);
    CHECK(res.bound <= 10.0 + 1e-9);
    CHECK(majority_value(p, res.assignment.values).has_value());
    CHECK_FALSE(res.trace.empty());
  }

  // Vertex argmax already has a majority: converges immediately with bound == score.
  const auto easy = Make({{5, 0}, {4, 1}, {0, 2}}, Zeros(2));
  const auto res = lr_solve(easy);
  CHECK(res.assignment.score == 11.0);

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 6;
    const int r = 2 + trial % 2;
    const auto psi = oracle::RandomRows(rng, n, r, 0, 2);
    const auto w = oracle::RandomRows(rng, r, r, 0, 1.5);
    const auto prob = Make(psi, w);
    const double exact = exact_majority(prob).score;
    for (auto strategy : {LrStrategy::kConservative, LrStrategy::kGolden, LrStrategy::kSubgradient}) {
      LrConfig config;
      config.strategy = strategy;
      const auto lr = lr_solve(prob, config);
      CHECK(lr.bound >= exact - 1e-9);
      CHECK(lr.assignment.score <= exact + 1e-9);
      CHECK(lr.assignment.score == doctest::Approx(evaluate_objective(prob, lr.assignment.values)));
    }
  }
}
