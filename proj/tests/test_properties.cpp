#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symclique/common.hpp"
#include "symclique/properties.hpp"

using namespace symclique;

namespace {

const LabelSet kCitation({"Title", "Author", "Venue", "Date", "Other"}, "Other");
const LabelSet kPlain({"A", "B", "C"});
const std::vector<std::string> kVocab = {"a", "b", "c", "Start"};

std::vector<int> L(const LabelSet& set, std::initializer_list<const char*> names) {
  std::vector<int> out;
  for (auto* n : names) out.push_back(set.index(n));
  return out;
}

std::string Show(const DecomposableProperty& p, PropertyValue v) {
  if (v.is_empty()) return "<empty>";
  if (v.is_bottom()) return "<bottom>";
  if (p.kind() == PropertyKind::kNextLabel && v.index() == p.end_value()) return "<end>";
  if (p.kind() == PropertyKind::kBeforeToken && v.index() == p.start_value()) return "<start>";
  return p.range().at(v.index());
}

std::vector<DecomposableProperty> AllProperties(const LabelSet& set, const std::string& token) {
  std::vector<DecomposableProperty> ps;
  ps.push_back(DecomposableProperty::TokenLabel(set, token));
  ps.push_back(DecomposableProperty::FirstNonOther(set));
  for (int y = 0; y < set.size(); ++y) {
    if (y == set.other()) continue;
    ps.push_back(DecomposableProperty::NextLabel(set, set.name(y)));
    ps.push_back(DecomposableProperty::BeforeToken(set, set.name(y), kVocab));
  }
  return ps;
}

oracle::PropertyCase CaseOf(const DecomposableProperty& p) {
  if (p.kind() == PropertyKind::kTokenLabel) return {"tokenlabel", p.token()};
  return {kind_name(p.kind()), p.anchor_name()};
}

}  // namespace

TEST_CASE("combine is a commutative monoid with absorbing bottom") {
  std::vector<PropertyValue> all = {PropertyValue::Empty(), PropertyValue::Bottom()};
  for (int i = 0; i < 4; ++i) all.push_back(PropertyValue::Val(i));
  for (auto a : all) {
    CHECK(combine(PropertyValue::Empty(), a) == a);
    CHECK(combine(PropertyValue::Bottom(), a) == PropertyValue::Bottom());
    for (auto b : all) {
      CHECK(combine(a, b) == combine(b, a));
      for (auto c : all) CHECK(combine(combine(a, b), c) == combine(a, combine(b, c)));
    }
  }
  CHECK(combine(PropertyValue::Val(2), PropertyValue::Val(2)) == PropertyValue::Val(2));
  CHECK(combine(PropertyValue::Val(1), PropertyValue::Val(2)) == PropertyValue::Bottom());
  CHECK(PropertyValue::Val(3).code() == 5);
}

TEST_CASE("token label fixes the label of a word") {
  const LabelSet ner({"Loc", "Org", "O"}, "O");
  const std::vector<std::string> x = {"in", "france", "and", "france"};
  auto p = DecomposableProperty::TokenLabel(ner, "france");
  CHECK(Show(p, property_of_labeling(p, x, L(ner, {"O", "Loc", "O", "Loc"}))) == "Loc");
  CHECK(property_of_labeling(p, x, L(ner, {"O", "Loc", "O", "Org"})).is_bottom());
  const std::vector<std::string> none = {"in", "spain"};
  CHECK_FALSE(p.applies(none));
  CHECK_THROWS_AS(property_of_labeling(p, none, L(ner, {"O", "Loc"})), std::invalid_argument);
}

TEST_CASE("next label after a title") {
  auto p = DecomposableProperty::NextLabel(kCitation, "Title");
  const std::vector<std::string> x(6, "a");
  CHECK(Show(p, property_of_labeling(p, x, L(kCitation, {"Title", "Other", "Author", "Title", "Other", "Author"}))) ==
        "Author");
  CHECK(property_of_labeling(p, x, L(kCitation, {"Title", "Author", "Other", "Title", "Date", "Other"}))
            .is_bottom());
  CHECK(Show(p, property_of_labeling(p, x, L(kCitation, {"Author", "Other", "Title", "Title", "Other", "Other"}))) ==
        "<end>");
  CHECK(property_of_labeling(p, x, L(kCitation, {"Author", "Other", "Date", "Date", "Other", "Other"})).is_empty());
  CHECK_THROWS_AS(DecomposableProperty::NextLabel(kCitation, "Publisher"), std::invalid_argument);
  CHECK_THROWS_AS(DecomposableProperty::NextLabel(kCitation, "Other"), std::invalid_argument);
}

TEST_CASE("before token and first non-other") {
  auto before = DecomposableProperty::BeforeToken(kCitation, "Title", kVocab);
  const std::vector<std::string> x = {"a", "b", "c"};
  CHECK(Show(before, property_of_labeling(before, x, L(kCitation, {"Title", "Title", "Author"}))) == "<start>");
  CHECK(Show(before, property_of_labeling(before, x, L(kCitation, {"Author", "Title", "Title"}))) == "a");
  CHECK(property_of_labeling(before, x, L(kCitation, {"Title", "Author", "Title"})).is_bottom());
  // The literal token "Start" and the sentinel are distinct values.
  const std::vector<std::string> y = {"Start", "b"};
  auto v = property_of_labeling(before, y, L(kCitation, {"Author", "Title"}));
  CHECK(v.index() == before.token_value("Start"));
  CHECK(v.index() != before.start_value());
  const std::vector<std::string> unknown = {"zzz", "b"};
  CHECK_THROWS_AS(property_of_labeling(before, unknown, L(kCitation, {"Author", "Title"})), RangeError);

  auto first = DecomposableProperty::FirstNonOther(kCitation);
  CHECK(Show(first, property_of_labeling(first, x, L(kCitation, {"Other", "Date", "Title"}))) == "Date");
  CHECK(property_of_labeling(first, x, L(kCitation, {"Other", "Other", "Other"})).is_empty());
}

TEST_CASE("augmentation inserts after labels") {
  const LabelSet small({"Title", "Author", "Other"}, "Other");
  std::vector<DecomposableProperty> ps = {DecomposableProperty::NextLabel(small, "Title")};
  auto aug = augment_labels(small, ps);
  REQUIRE(aug.size() == 4);
  CHECK(aug.names()[3] == "After-Title");
  CHECK(aug.relabel(L(small, {"Title", "Other", "Author"})) == std::vector<int>{0, 3, 1});
  CHECK(aug.unrelabel(std::vector<int>{0, 3, 1}) == L(small, {"Title", "Other", "Author"}));

  std::vector<DecomposableProperty> plain = {DecomposableProperty::TokenLabel(small, "a"),
                                             DecomposableProperty::BeforeToken(small, "Title", kVocab)};
  auto same = augment_labels(small, plain);
  CHECK(same.is_identity());
  CHECK(same.relabel(L(small, {"Other", "Title"})) == L(small, {"Other", "Title"}));
}

TEST_CASE("augmented paths are exactly the relabeled sequences") {
  auto ps = AllProperties(kCitation, "a");
  auto aug = augment_labels(kCitation, ps);
  CHECK(aug.size() == kCitation.size() + 5);
  const int t = 4;
  std::vector<int> seq(t, 0);
  int valid = 0;
  const int states = aug.size();
  int total = 1;
  for (int i = 0; i < t; ++i) total *= states;
  for (int code = 0; code < total; ++code) {
    int rest = code;
    for (int i = 0; i < t; ++i) {
      seq[i] = rest % states;
      rest /= states;
    }
    bool ok = true;
    for (int i = 0; i < t && ok; ++i) ok = aug.allowed(i == 0 ? kStartLabel : seq[i - 1], seq[i]);
    if (ok) {
      ++valid;
      CHECK(aug.relabel(aug.unrelabel(seq)) == seq);
    }
  }
  int originals = 1;
  for (int i = 0; i < t; ++i) originals *= kCitation.size();
  CHECK(valid == originals);
}

TEST_CASE("library, oracle and edge-local forms agree on random labelings") {
  std::mt19937_64 rng(7);
  for (const LabelSet* set : {&kCitation, &kPlain}) {
    auto ps = AllProperties(*set, "a");
    auto aug = augment_labels(*set, ps);
    for (int trial = 0; trial < 3000; ++trial) {
      const int t = std::uniform_int_distribution<int>(1, 7)(rng);
      std::vector<std::string> x(t);
      std::vector<int> y(t);
      std::vector<std::string> names(t);
      for (int i = 0; i < t; ++i) {
        x[i] = kVocab[std::uniform_int_distribution<int>(0, 3)(rng)];
        y[i] = std::uniform_int_distribution<int>(0, set->size() - 1)(rng);
        names[i] = set->name(y[i]);
      }
      const auto relabeled = aug.relabel(y);
      for (const auto& p : ps) {
        if (!p.applies(x)) continue;
        const auto want = oracle::PropertyOf(CaseOf(p), x, names, set->has_other() ? set->name(set->other()) : "");
        CHECK(Show(p, property_of_labeling(p, x, y)) == want);
        EdgeEvaluator e(p, aug);
        CHECK(Show(p, e.Evaluate(x, relabeled)) == want);
      }
    }
  }
}
