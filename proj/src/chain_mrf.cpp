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

#include "symclique/chain_mrf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace symclique {

void ChainInstance::Validate(bool allow_unreachable) const {
  const std::size_t t = tokens.size();
  if (t == 0) throw SizeError("chain instance '" + id + "' has no tokens");
  if (node.rows() != t || node.cols() == 0) throw DimensionError("node table must be T x |Y|");
  if (edge.size() != t - 1) throw DimensionError("expected T - 1 edge tables");
  const std::size_t y = node.cols();
  auto check = [&](double v) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity() || (!allow_unreachable && !std::isfinite(v))) {
      throw std::invalid_argument("chain instance '" + id + "' has a non-finite potential");
    }
  };
  for (double v : node.data()) check(v);
  for (const auto& e : edge) {
    if (e.rows() != y || e.cols() != y) throw DimensionError("edge tables must be |Y| x |Y|");
    for (double v : e.data()) check(v);
  }
  if (gold) {
    if (gold->size() != t) throw DimensionError("gold labeling length differs from T");
    for (int g : *gold) {
      if (g < 0 || g >= static_cast<int>(y)) throw RangeError("gold label out of range");
    }
  }
}

double chain_score(const ChainInstance& instance, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != instance.length()) throw DimensionError("labeling length differs from T");
  double s = 0.0;
  for (int c = 0; c < instance.length(); ++c) {
    if (labels[c] < 0 || labels[c] >= instance.num_labels()) throw RangeError("label id out of range");
    s += instance.node(c, labels[c]);
    if (c > 0) s += instance.edge[c - 1](labels[c - 1], labels[c]);
  }
  return s;
}

ChainLabeling viterbi(const ChainInstance& instance) {
  auto m = compute_messages(instance, {}, {}, std::nullopt);
  ChainLabeling out;
  out.labels = m.Traceback(0);
  out.score = chain_score(instance, out.labels);
  return out;
}

ChainInstance augment_instance(const ChainInstance& instance, const Augmentation& augmentation) {
  if (instance.num_labels() != augmentation.original().size()) {
    throw DimensionError("instance label count differs from the augmentation's label set");
  }
  const int t = instance.length();
  const int y = augmentation.size();
  ChainInstance out;
  out.id = instance.id;
  out.tokens = instance.tokens;
  out.node = Table(t, y);
  for (int c = 0; c < t; ++c) {
    for (int a = 0; a < y; ++a) out.node(c, a) = instance.node(c, augmentation.to_original(a));
  }
  for (int a = 0; a < y; ++a) {
    if (!augmentation.allowed(kStartLabel, a)) out.node(0, a) = kNegInf;
  }
  for (const auto& e : instance.edge) {
    Table te(y, y);
    for (int a = 0; a < y; ++a) {
      for (int b = 0; b < y; ++b) {
        te(a, b) = augmentation.allowed(a, b) ? e(augmentation.to_original(a), augmentation.to_original(b)) : kNegInf;
      }
    }
    out.edge.push_back(std::move(te));
  }
  if (instance.gold) out.gold = augmentation.relabel(*instance.gold);
  return out;
}

ValueGrid ValueGrid::Full(int range_size) {
  std::vector<int> all(range_size);
  std::iota(all.begin(), all.end(), 0);
  return Restricted(range_size, std::move(all));
}

ValueGrid ValueGrid::Restricted(int range_size, std::vector<int> kept) {
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  ValueGrid g;
  g.range_size_ = range_size;
  g.to_local_.assign(range_size, -1);
  for (int v : kept) {
    if (v < 0 || v >= range_size) throw RangeError("kept value outside the property range");
    g.to_local_[v] = PropertyValue::kFirstValueCode + static_cast<int>(g.kept_.size());
    g.kept_.push_back(v);
  }
  return g;
}

int ValueGrid::local(PropertyValue v) const {
  if (!v.has_value()) return v.code();
  if (v.index() >= range_size_) return -1;
  return to_local_[v.index()];
}

PropertyValue ValueGrid::value(int local) const {
  if (local < PropertyValue::kFirstValueCode) return PropertyValue::FromCode(local);
  return PropertyValue::Val(kept_.at(local - PropertyValue::kFirstValueCode));
}

namespace internal {

inline constexpr int kNoFire = -1;

struct Lattice {
  int t = 0;
  int y = 0;
  int k = 0;
  int g = 1;
  std::vector<ValueGrid> grids;
  // Internal radix per property: the grid plus, for restricted grids, one
  // hidden code standing for any value outside the grid.
  std::vector<int> radix;
  std::vector<int> stride;
  std::vector<int> digits;  // g x k
  int pub_g = 1;
  std::vector<int> pub_stride;
  std::vector<int> pub_to_internal;
  std::vector<double> pub_m;
  Table node;
  std::vector<Table> edge;
  // Fired local code per part, (prev slot, cur slot), property. Part 0 has a
  // single prev slot (start), part t a single cur slot (end).
  std::vector<std::vector<int>> fire;
  std::vector<double> w;  // t x y x g
  std::vector<double> m;

  int PrevSlots(int part) const { return part == 0 ? 1 : y; }
  int CurSlots(int part) const { return part == t ? 1 : y; }
  const int* Fired(int part, int prev_slot, int cur_slot) const {
    return fire[part].data() + (static_cast<std::size_t>(prev_slot) * CurSlots(part) + cur_slot) * k;
  }
  double& W(int c, int label, int code) { return w[(static_cast<std::size_t>(c) * y + label) * g + code]; }
  double W(int c, int label, int code) const { return w[(static_cast<std::size_t>(c) * y + label) * g + code]; }

  // Code after folding the fired values into `code`.
  int Apply(const int* fired, int code) const {
    int out = 0;
    for (int j = 0; j < k; ++j) {
      int acc = digits[static_cast<std::size_t>(code) * k + j];
      const int f = fired[j];
      if (f != kNoFire) {
        if (acc == PropertyValue::kEmptyCode) {
          acc = f;
        } else if (acc != f) {
          acc = PropertyValue::kBottomCode;
        }
      }
      out += acc * stride[j];
    }
    return out;
  }
};

}  // namespace internal

namespace {

using internal::Lattice;

void Prune(Lattice& lat, int c, int beam) {
  const std::size_t width = static_cast<std::size_t>(lat.y) * lat.g;
  double* row = lat.w.data() + static_cast<std::size_t>(c) * width;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < width; ++i) {
    if (row[i] != kNegInf) live.push_back(i);
  }
  if (live.size() <= static_cast<std::size_t>(beam)) return;
  std::stable_sort(live.begin(), live.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  for (std::size_t i = beam; i < live.size(); ++i) row[live[i]] = kNegInf;
}

}  // namespace

AggregatedMessage::AggregatedMessage() = default;
AggregatedMessage::~AggregatedMessage() = default;
AggregatedMessage::AggregatedMessage(AggregatedMessage&&) noexcept = default;
AggregatedMessage& AggregatedMessage::operator=(AggregatedMessage&&) noexcept = default;

int AggregatedMessage::num_properties() const { return lattice_->k; }
const ValueGrid& AggregatedMessage::grid(int k) const { return lattice_->grids.at(k); }
int AggregatedMessage::size() const { return lattice_->pub_g; }
double AggregatedMessage::operator[](int code) const { return lattice_->pub_m.at(code); }
std::span<const double> AggregatedMessage::values() const { return lattice_->pub_m; }

int AggregatedMessage::Pack(std::span<const int> locals) const {
  if (static_cast<int>(locals.size()) != lattice_->k) throw DimensionError("one local code per property expected");
  int code = 0;
  for (int j = 0; j < lattice_->k; ++j) {
    if (locals[j] < 0 || locals[j] >= lattice_->grids[j].size()) throw RangeError("local code out of range");
    code += locals[j] * lattice_->pub_stride[j];
  }
  return code;
}

std::vector<int> AggregatedMessage::Unpack(int code) const {
  if (code < 0 || code >= lattice_->pub_g) throw RangeError("message code out of range");
  std::vector<int> out;
  for (int j = 0; j < lattice_->k; ++j) out.push_back(code / lattice_->pub_stride[j] % lattice_->grids[j].size());
  return out;
}

double AggregatedMessage::At(std::span<const PropertyValue> values) const {
  if (static_cast<int>(values.size()) != lattice_->k) throw DimensionError("one value per property expected");
  std::vector<int> locals;
  for (int j = 0; j < lattice_->k; ++j) {
    const int l = lattice_->grids[j].local(values[j]);
    if (l < 0) return kNegInf;
    locals.push_back(l);
  }
  return lattice_->pub_m[Pack(locals)];
}

std::vector<int> AggregatedMessage::Traceback(int pub_code) const {
  const Lattice& lat = *lattice_;
  if (pub_code < 0 || pub_code >= lat.pub_g) throw RangeError("message code out of range");
  const int code = lat.pub_to_internal[pub_code];
  if (lat.m[code] == kNegInf) throw std::invalid_argument("no labeling reaches the requested property values");
  std::vector<int> labels;
  std::vector<char> allowed(lat.g, 0);
  std::vector<char> next(lat.g, 0);
  for (int y = 0; y < lat.y && labels.empty(); ++y) {
    const int* f = lat.Fired(0, 0, y);
    for (int s = 0; s < lat.g; ++s) {
      const double v = lat.W(0, y, s);
      if (v != kNegInf && v == lat.m[code] && lat.Apply(f, s) == code) {
        next[s] = 1;
        if (labels.empty()) labels.push_back(y);
      }
    }
  }
  for (int c = 0; c + 1 < lat.t; ++c) {
    allowed.swap(next);
    std::fill(next.begin(), next.end(), 0);
    const int y = labels.back();
    bool found = false;
    for (int y2 = 0; y2 < lat.y && !found; ++y2) {
      const double e = lat.edge[c](y, y2);
      if (e == kNegInf) continue;
      const int* f = lat.Fired(c + 1, y, y2);
      for (int s = 0; s < lat.g; ++s) {
        const double tail = lat.W(c + 1, y2, s);
        if (tail == kNegInf) continue;
        const int to = lat.Apply(f, s);
        if (to < 0 || !allowed[to] || lat.node(c, y) + (e + tail) != lat.W(c, y, to)) continue;
        next[s] = 1;
        found = true;
      }
      if (found) labels.push_back(y2);
    }
    if (!found) throw std::logic_error("traceback lost the optimal path");
  }
  return labels;
}

AggregatedMessage compute_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                   std::span<const ValueGrid> grids, std::optional<int> beam_width) {
  instance.Validate(/*allow_unreachable=*/true);
  if (!grids.empty() && grids.size() != evaluators.size()) throw DimensionError("one grid per property expected");
  if (beam_width && *beam_width < 1) throw std::invalid_argument("beam width must be at least 1");
  for (const auto& e : evaluators) {
    if (!e.property().applies(instance.tokens)) throw std::invalid_argument("instance is outside a property domain");
  }
  auto lat = std::make_unique<Lattice>();
  lat->t = instance.length();
  lat->y = instance.num_labels();
  lat->k = static_cast<int>(evaluators.size());
  for (int j = 0; j < lat->k; ++j) {
    lat->grids.push_back(grids.empty() ? ValueGrid::Full(evaluators[j].property().range_size()) : grids[j]);
    if (lat->grids[j].range_size() != evaluators[j].property().range_size()) {
      throw DimensionError("grid does not match the property range");
    }
    lat->radix.push_back(lat->grids[j].size() + (lat->grids[j].is_full() ? 0 : 1));
    lat->stride.push_back(lat->g);
    lat->g *= lat->radix[j];
    lat->pub_stride.push_back(lat->pub_g);
    lat->pub_g *= lat->grids[j].size();
  }
  lat->digits.resize(static_cast<std::size_t>(lat->g) * lat->k);
  for (int code = 0; code < lat->g; ++code) {
    for (int j = 0; j < lat->k; ++j) {
      lat->digits[static_cast<std::size_t>(code) * lat->k + j] = code / lat->stride[j] % lat->radix[j];
    }
  }
  lat->node = instance.node;
  lat->edge = instance.edge;

  const int t = lat->t;
  const int ny = lat->y;
  lat->fire.resize(t + 1);
  for (int part = 0; part <= t; ++part) {
    auto& table = lat->fire[part];
    table.resize(static_cast<std::size_t>(lat->PrevSlots(part)) * lat->CurSlots(part) * lat->k);
    for (int ps = 0; ps < lat->PrevSlots(part); ++ps) {
      for (int cs = 0; cs < lat->CurSlots(part); ++cs) {
        const int prev = part == 0 ? kStartLabel : ps;
        const int cur = part == t ? kEndLabel : cs;
        for (int j = 0; j < lat->k; ++j) {
          const int v = evaluators[j].Fire(instance.tokens, part, prev, cur);
          int code = internal::kNoFire;
          if (v >= 0) {
            code = lat->grids[j].local(PropertyValue::Val(v));
            if (code < 0) code = lat->grids[j].size();
          }
          table[(static_cast<std::size_t>(ps) * lat->CurSlots(part) + cs) * lat->k + j] = code;
        }
      }
    }
  }

  lat->w.assign(static_cast<std::size_t>(t) * ny * lat->g, kNegInf);
  for (int y = 0; y < ny; ++y) {
    const int to = lat->Apply(lat->Fired(t, y, 0), 0);
    if (to >= 0 && lat->node(t - 1, y) != kNegInf) lat->W(t - 1, y, to) = lat->node(t - 1, y);
  }
  if (beam_width) Prune(*lat, t - 1, *beam_width);
  std::vector<double> best(lat->g);
  for (int c = t - 2; c >= 0; --c) {
    for (int y = 0; y < ny; ++y) {
      if (lat->node(c, y) == kNegInf) continue;
      std::fill(best.begin(), best.end(), kNegInf);
      for (int y2 = 0; y2 < ny; ++y2) {
        const double e = lat->edge[c](y, y2);
        if (e == kNegInf) continue;
        const int* f = lat->Fired(c + 1, y, y2);
        for (int s = 0; s < lat->g; ++s) {
          const double tail = lat->W(c + 1, y2, s);
          if (tail == kNegInf) continue;
          const int to = lat->Apply(f, s);
          if (to >= 0) best[to] = std::max(best[to], e + tail);
        }
      }
      for (int s = 0; s < lat->g; ++s) {
        if (best[s] != kNegInf) lat->W(c, y, s) = lat->node(c, y) + best[s];
      }
    }
    if (beam_width) Prune(*lat, c, *beam_width);
  }
  lat->m.assign(lat->g, kNegInf);
  for (int y = 0; y < ny; ++y) {
    const int* f = lat->Fired(0, 0, y);
    for (int s = 0; s < lat->g; ++s) {
      const double v = lat->W(0, y, s);
      if (v == kNegInf) continue;
      const int to = lat->Apply(f, s);
      if (to >= 0) lat->m[to] = std::max(lat->m[to], v);
    }
  }
  for (int pub = 0; pub < lat->pub_g; ++pub) {
    int code = 0;
    for (int j = 0; j < lat->k; ++j) code += pub / lat->pub_stride[j] % lat->grids[j].size() * lat->stride[j];
    lat->pub_to_internal.push_back(code);
    lat->pub_m.push_back(lat->m[code]);
  }
  AggregatedMessage out;
  out.lattice_ = std::move(lat);
  return out;
}

AggregatedMessage property_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                    std::span<const ValueGrid> grids) {
  return compute_messages(instance, evaluators, grids, std::nullopt);
}

AggregatedMessage beam_property_messages(const ChainInstance& instance, std::span<const EdgeEvaluator> evaluators,
                                         std::span<const ValueGrid> grids, int beam_width) {
  return compute_messages(instance, evaluators, grids, beam_width);
}

namespace {

void CheckIncoming(const AggregatedMessage& aggregated, std::span<const std::vector<double>> incoming, int skip) {
  if (static_cast<int>(incoming.size()) != aggregated.num_properties()) {
    throw DimensionError("one incoming message per property expected");
  }
  for (int j = 0; j < aggregated.num_properties(); ++j) {
    if (j != skip && static_cast<int>(incoming[j].size()) != aggregated.grid(j).size()) {
      throw DimensionError("incoming message does not match the property grid");
    }
  }
}

}  // namespace

std::vector<double> msg_instance_to_clique(const AggregatedMessage& aggregated, int p,
                                           std::span<const std::vector<double>> incoming) {
  if (p < 0 || p >= aggregated.num_properties()) throw RangeError("property index out of range");
  CheckIncoming(aggregated, incoming, p);
  std::vector<double> out(aggregated.grid(p).size(), kNegInf);
  for (int code = 0; code < aggregated.size(); ++code) {
    double v = aggregated[code];
    if (v == kNegInf) continue;
    const auto locals = aggregated.Unpack(code);
    for (int j = 0; j < aggregated.num_properties(); ++j) {
      if (j != p) v += incoming[j][locals[j]];
    }
    out[locals[p]] = std::max(out[locals[p]], v);
  }
  return out;
}

int best_code(const AggregatedMessage& aggregated, std::span<const std::vector<double>> incoming) {
  CheckIncoming(aggregated, incoming, -1);
  int best = -1;
  double best_value = kNegInf;
  for (int code = 0; code < aggregated.size(); ++code) {
    double v = aggregated[code];
    if (v == kNegInf) continue;
    const auto locals = aggregated.Unpack(code);
    for (int j = 0; j < aggregated.num_properties(); ++j) v += incoming[j][locals[j]];
    if (best < 0 || v > best_value) {
      best = code;
      best_value = v;
    }
  }
  if (best < 0) throw std::invalid_argument("no reachable property values");
  return best;
}

std::vector<ValueGrid> restrict_ranges(std::span<const ChainInstance> instances,
                                       std::span<const EdgeEvaluator> evaluators) {
  std::vector<std::vector<int>> kept(evaluators.size());
  for (const auto& instance : instances) {
    const auto map = viterbi(instance);
    for (std::size_t j = 0; j < evaluators.size(); ++j) {
      if (!evaluators[j].property().applies(instance.tokens)) continue;
      const int t = instance.length();
      for (int c = 0; c <= t; ++c) {
        const int prev = c == 0 ? kStartLabel : map.labels[c - 1];
        const int cur = c == t ? kEndLabel : map.labels[c];
        const int v = evaluators[j].Fire(instance.tokens, c, prev, cur);
        if (v >= 0) kept[j].push_back(v);
      }
    }
  }
  std::vector<ValueGrid> out;
  for (std::size_t j = 0; j < evaluators.size(); ++j) {
    out.push_back(ValueGrid::Restricted(evaluators[j].property().range_size(), std::move(kept[j])));
  }
  return out;
}

ChainInstance local_absorb(const ChainInstance& instance, const EdgeEvaluator& evaluator, const ValueGrid& grid,
                           std::span<const double> message) {
  if (static_cast<int>(message.size()) != grid.size()) throw DimensionError("message does not match the grid");
  if (!std::isfinite(message[PropertyValue::kEmptyCode])) throw std::invalid_argument("m(∅) must be finite");
  auto delta = [&](int fired) {
    if (fired < 0) return 0.0;
    const int l = grid.local(PropertyValue::Val(fired));
    return l < 0 ? 0.0 : message[l] - message[PropertyValue::kEmptyCode];
  };
  ChainInstance out = instance;
  const int t = instance.length();
  const int ny = instance.num_labels();
  const auto& x = instance.tokens;
  for (int y = 0; y < ny; ++y) {
    out.node(0, y) += delta(evaluator.Fire(x, 0, kStartLabel, y));
    out.node(t - 1, y) += delta(evaluator.Fire(x, t, y, kEndLabel));
  }
  for (int c = 1; c < t; ++c) {
    for (int a = 0; a < ny; ++a) {
      for (int b = 0; b < ny; ++b) out.edge[c - 1](a, b) += delta(evaluator.Fire(x, c, a, b));
    }
  }
  return out;
}

}  // namespace symclique
