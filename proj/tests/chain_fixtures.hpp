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

// Random chains with string-level property oracles, shared by the chain,
// cluster-graph and acceptance tests.

#ifndef SYMCLIQUE_TESTS_CHAIN_FIXTURES_HPP_
#define SYMCLIQUE_TESTS_CHAIN_FIXTURES_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symclique/chain_mrf.hpp"
#include "symclique/properties.hpp"

namespace fixture {

using symclique::ChainInstance;
using symclique::DecomposableProperty;
using symclique::PropertyKind;
using symclique::PropertyValue;

using symclique::AggregatedMessage;
using symclique::Augmentation;
using symclique::EdgeEvaluator;
using symclique::LabelSet;
using symclique::kNegInf;

inline const LabelSet kTAO({"T", "A", "O"}, "O");
inline const LabelSet kAB({"A", "B"});
inline const LabelSet kTO({"T", "O"}, "O");

inline const std::vector<std::string> kTokens = {"a", "b", "c"};

inline ChainInstance MakeChain(const std::vector<std::string>& tokens, const oracle::Rows& node,
                               const std::vector<oracle::Rows>& edge) {
  ChainInstance out;
  out.tokens = tokens;
  out.node = symclique::Table::FromRows(node);
  for (const auto& e : edge) out.edge.push_back(symclique::Table::FromRows(e));
  return out;
}

struct RandomChain {
  std::vector<std::string> tokens;
  oracle::Rows node;
  std::vector<oracle::Rows> edge;
  ChainInstance Instance() const { return MakeChain(tokens, node, edge); }
};

// Integer-valued potentials make ties common, which exercises the tie rules.
inline RandomChain MakeRandomChain(std::mt19937_64& rng, int t, int y, bool integral) {
  RandomChain c;
  std::uniform_int_distribution<int> tok(0, static_cast<int>(kTokens.size()) - 1);
  for (int i = 0; i < t; ++i) c.tokens.push_back(kTokens[tok(rng)]);
  if (integral) {
    std::uniform_int_distribution<int> u(-2, 2);
    c.node.assign(t, std::vector<double>(y));
    for (auto& r : c.node) {
      for (auto& v : r) v = u(rng);
    }
    c.edge.assign(t - 1, oracle::Rows(y, std::vector<double>(y)));
    for (auto& e : c.edge) {
      for (auto& r : e) {
        for (auto& v : r) v = u(rng);
      }
    }
  } else {
    c.node = oracle::RandomRows(rng, t, y, -1, 1);
    for (int i = 0; i + 1 < t; ++i) c.edge.push_back(oracle::RandomRows(rng, y, y, -1, 1));
  }
  return c;
}

inline oracle::PropertyCase CaseOf(const DecomposableProperty& p, const symclique::LabelSet& labels) {
  if (p.kind() == PropertyKind::kTokenLabel) return {"tokenlabel", p.token()};
  if (p.kind() == PropertyKind::kFirstNonOther) return {"firstnonother", ""};
  return {kind_name(p.kind()), labels.name(p.anchor())};
}

// Oracle spelling of a library value.
inline std::string Show(const DecomposableProperty& p, PropertyValue v) {
  if (v.is_empty()) return "<empty>";
  if (v.is_bottom()) return "<bottom>";
  if (p.kind() == PropertyKind::kNextLabel && v.index() == p.end_value()) return "<end>";
  if (p.kind() == PropertyKind::kBeforeToken && v.index() == p.start_value()) return "<start>";
  return p.range().at(v.index());
}

// Max chain score per tuple of oracle property values, over all labelings.
inline std::map<std::vector<std::string>, double> GroupedMax(const RandomChain& chain,
                                                             const symclique::LabelSet& labels,
                                                             const std::vector<DecomposableProperty>& props) {
  std::map<std::vector<std::string>, double> out;
  const std::string other = labels.has_other() ? labels.name(labels.other()) : "";
  oracle::ForEachLabeling(static_cast<int>(chain.tokens.size()), labels.size(), [&](const std::vector<int>& y) {
    std::vector<std::string> names;
    for (int v : y) names.push_back(labels.name(v));
    std::vector<std::string> key;
    for (const auto& p : props) key.push_back(oracle::PropertyOf(CaseOf(p, labels), chain.tokens, names, other));
    const double s = oracle::ChainScore(chain.node, chain.edge, y);
    auto [it, fresh] = out.emplace(key, s);
    if (!fresh && s > it->second) it->second = s;
  });
  return out;
}

// Random property drawn from the four kinds over `labels`.
inline DecomposableProperty RandomProperty(std::mt19937_64& rng, const symclique::LabelSet& labels) {
  std::vector<int> anchors;
  for (int y = 0; y < labels.size(); ++y) {
    if (y != labels.other()) anchors.push_back(y);
  }
  const std::string anchor = labels.name(anchors[std::uniform_int_distribution<int>(0, anchors.size() - 1)(rng)]);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return DecomposableProperty::TokenLabel(labels, kTokens[std::uniform_int_distribution<int>(0, 2)(rng)]);
    case 1: return DecomposableProperty::FirstNonOther(labels);
    case 2: return DecomposableProperty::NextLabel(labels, anchor);
    default: return DecomposableProperty::BeforeToken(labels, anchor, kTokens);
  }
}

// Augmented chain and evaluators for a fixed property list.
struct Setup {
  std::vector<DecomposableProperty> props;
  Augmentation aug;
  std::vector<EdgeEvaluator> evals;
  ChainInstance augmented;
};

inline Setup Prepare(const ChainInstance& chain, const LabelSet& labels, std::vector<DecomposableProperty> props) {
  Setup s{std::move(props), {}, {}, {}};
  s.aug = augment_labels(labels, s.props);
  for (const auto& p : s.props) s.evals.emplace_back(p, s.aug);
  s.augmented = augment_instance(chain, s.aug);
  return s;
}

// Random chain with up to two properties whose domains include it.
struct Case {
  fixture::RandomChain chain;
  const LabelSet* labels;
  std::vector<DecomposableProperty> props;
};

inline Case RandomCase(std::mt19937_64& rng, bool integral) {
  const LabelSet* kSets[] = {&kTAO, &kAB, &kTO};
  const LabelSet* labels = kSets[std::uniform_int_distribution<int>(0, 2)(rng)];
  const int t = std::uniform_int_distribution<int>(1, 6)(rng);
  Case c{fixture::MakeRandomChain(rng, t, labels->size(), integral), labels, {}};
  const int k = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int j = 0; j < k; ++j) {
    auto p = fixture::RandomProperty(rng, *labels);
    if (p.kind() == PropertyKind::kTokenLabel) {
      p = DecomposableProperty::TokenLabel(*labels, c.chain.tokens[std::uniform_int_distribution<int>(0, t - 1)(rng)]);
    }
    c.props.push_back(p);
  }
  return c;
}

inline std::vector<std::string> KeyOf(const AggregatedMessage& m, const Setup& s, int code) {
  std::vector<std::string> key;
  const auto locals = m.Unpack(code);
  for (std::size_t j = 0; j < s.props.size(); ++j) key.push_back(fixture::Show(s.props[j], m.grid(j).value(locals[j])));
  return key;
}

// Exact joint optimum of a one-property model: best chain score per property
// value, then every tuple of values across the instances.
inline double JointOptimum(const std::vector<fixture::RandomChain>& chains, const LabelSet& labels,
                    const DecomposableProperty& p, const std::function<double(const oracle::Counts&)>& clique,
                    const std::vector<std::string>& values) {
  std::vector<std::vector<double>> best(chains.size(), std::vector<double>(values.size(), kNegInf));
  const std::string other = labels.name(labels.other());
  for (std::size_t i = 0; i < chains.size(); ++i) {
    oracle::ForEachLabeling(static_cast<int>(chains[i].tokens.size()), labels.size(), [&](const std::vector<int>& y) {
      std::vector<std::string> names;
      for (int v : y) names.push_back(labels.name(v));
      const auto value = oracle::PropertyOf(fixture::CaseOf(p, labels), chains[i].tokens, names, other);
      const auto at = std::find(values.begin(), values.end(), value) - values.begin();
      best[i][at] = std::max(best[i][at], oracle::ChainScore(chains[i].node, chains[i].edge, y));
    });
  }
  double top = kNegInf;
  oracle::ForEachLabeling(static_cast<int>(chains.size()), static_cast<int>(values.size()),
                          [&](const std::vector<int>& pick) {
                            double s = 0;
                            oracle::Counts counts(values.size(), 0);
                            for (std::size_t i = 0; i < pick.size(); ++i) {
                              s += best[i][pick[i]];
                              ++counts[pick[i]];
                            }
                            if (s != kNegInf) top = std::max(top, s + clique(counts));
                          });
  return top;
}

// Potts over the fired values only; entries 0 and 1 hold ∅ and ⊥.
inline double PottsOnValues(double lambda, const oracle::Counts& c) {
  oracle::Counts values(c.begin() + 2, c.end());
  return oracle::Potts(lambda, values);
}

inline std::vector<std::string> OracleValues(const DecomposableProperty& p) {
  std::vector<std::string> out = {"<empty>", "<bottom>"};
  for (int v = 0; v < p.range_size(); ++v) out.push_back(fixture::Show(p, PropertyValue::Val(v)));
  return out;
}

}  // namespace fixture

#endif  // SYMCLIQUE_TESTS_CHAIN_FIXTURES_HPP_
