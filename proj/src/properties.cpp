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

#include "symclique/properties.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "symclique/common.hpp"

namespace symclique {

LabelSet::LabelSet(std::vector<std::string> names, std::optional<std::string> other) : names_(std::move(names)) {
  if (names_.empty()) throw std::invalid_argument("label set is empty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate label '" + names_[i] + "'");
    }
  }
  if (other) other_ = index(*other);
}

std::optional<int> LabelSet::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

int LabelSet::index(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw std::invalid_argument("unknown label '" + std::string(name) + "'");
}

std::string kind_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::kTokenLabel: return "tokenlabel";
    case PropertyKind::kNextLabel: return "nextlabel";
    case PropertyKind::kFirstNonOther: return "firstnonother";
    case PropertyKind::kBeforeToken: return "beforetoken";
  }
  return "unknown";
}

PropertyKind parse_property_kind(std::string_view name) {
  for (auto kind : {PropertyKind::kTokenLabel, PropertyKind::kNextLabel, PropertyKind::kFirstNonOther,
                    PropertyKind::kBeforeToken}) {
    if (kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown property kind '" + std::string(name) + "'");
}

DecomposableProperty::DecomposableProperty(PropertyKind kind, const LabelSet& labels)
    : kind_(kind), num_labels_(labels.size()), other_(labels.other()), label_to_range_(labels.size(), -1) {}

namespace {

int AnchorOf(const LabelSet& labels, std::string_view anchor) {
  auto id = labels.find(anchor);
  if (!id) throw std::invalid_argument("anchor label '" + std::string(anchor) + "' is not in the label set");
  if (*id == labels.other()) throw std::invalid_argument("the Other label cannot anchor a property");
  return *id;
}

}  // namespace

DecomposableProperty DecomposableProperty::TokenLabel(const LabelSet& labels, std::string token) {
  DecomposableProperty p(PropertyKind::kTokenLabel, labels);
  p.token_ = std::move(token);
  for (int y = 0; y < labels.size(); ++y) {
    p.label_to_range_[y] = y;
    p.range_.push_back(labels.name(y));
  }
  return p;
}

DecomposableProperty DecomposableProperty::NextLabel(const LabelSet& labels, std::string_view anchor) {
  DecomposableProperty p(PropertyKind::kNextLabel, labels);
  p.anchor_ = AnchorOf(labels, anchor);
  p.anchor_name_ = std::string(anchor);
  for (int y = 0; y < labels.size(); ++y) {
    if (y == labels.other()) continue;
    p.label_to_range_[y] = p.range_size();
    p.range_.push_back(labels.name(y));
  }
  p.sentinel_ = p.range_size();
  p.range_.push_back("End");
  return p;
}

DecomposableProperty DecomposableProperty::FirstNonOther(const LabelSet& labels) {
  DecomposableProperty p(PropertyKind::kFirstNonOther, labels);
  for (int y = 0; y < labels.size(); ++y) {
    if (y == labels.other()) continue;
    p.label_to_range_[y] = p.range_size();
    p.range_.push_back(labels.name(y));
  }
  return p;
}

DecomposableProperty DecomposableProperty::BeforeToken(const LabelSet& labels, std::string_view anchor,
                                                       std::vector<std::string> vocabulary) {
  DecomposableProperty p(PropertyKind::kBeforeToken, labels);
  p.anchor_ = AnchorOf(labels, anchor);
  p.anchor_name_ = std::string(anchor);
  for (auto& token : vocabulary) {
    if (p.token_to_range_.emplace(token, p.range_size()).second) p.range_.push_back(std::move(token));
  }
  p.sentinel_ = p.range_size();
  p.range_.push_back("Start");
  return p;
}

std::string DecomposableProperty::name() const {
  switch (kind_) {
    case PropertyKind::kTokenLabel: return "tokenlabel(" + token_ + ")";
    case PropertyKind::kFirstNonOther: return "firstnonother";
    default: return kind_name(kind_) + "(" + anchor_name_ + ")";
  }
}

int DecomposableProperty::token_value(std::string_view token) const {
  auto it = token_to_range_.find(std::string(token));
  return it == token_to_range_.end() ? -1 : it->second;
}

bool DecomposableProperty::applies(std::span<const std::string> tokens) const {
  if (kind_ != PropertyKind::kTokenLabel) return true;
  return std::find(tokens.begin(), tokens.end(), token_) != tokens.end();
}

namespace {

int TokenValueOrThrow(const DecomposableProperty& p, const std::string& token) {
  const int v = p.token_value(token);
  if (v < 0) throw RangeError("token '" + token + "' is outside the property vocabulary");
  return v;
}

}  // namespace

std::vector<int> DecomposableProperty::components(std::span<const std::string> tokens,
                                                  std::span<const int> labels) const {
  const int t = static_cast<int>(labels.size());
  if (tokens.size() != labels.size()) throw DimensionError("tokens and labels differ in length");
  for (int y : labels) {
    if (y < 0 || y >= num_labels_) throw RangeError("label id out of range");
  }
  std::vector<int> out(t, -1);
  switch (kind_) {
    case PropertyKind::kTokenLabel:
      for (int c = 0; c < t; ++c) {
        if (tokens[c] == token_) out[c] = labels[c];
      }
      break;
    case PropertyKind::kNextLabel:
      for (int c = 0; c < t; ++c) {
        if (labels[c] != anchor_ || (c + 1 < t && labels[c + 1] == anchor_)) continue;
        int j = c + 1;
        while (j < t && labels[j] == other_) ++j;
        out[c] = j < t ? label_to_range_[labels[j]] : sentinel_;
      }
      break;
    case PropertyKind::kFirstNonOther:
      for (int c = 0; c < t; ++c) {
        if (labels[c] != other_) {
          out[c] = label_to_range_[labels[c]];
          break;
        }
      }
      break;
    case PropertyKind::kBeforeToken:
      for (int c = 0; c < t; ++c) {
        if (labels[c] != anchor_ || (c > 0 && labels[c - 1] == anchor_)) continue;
        out[c] = c == 0 ? sentinel_ : TokenValueOrThrow(*this, tokens[c - 1]);
      }
      break;
  }
  return out;
}

PropertyValue property_of_labeling(const DecomposableProperty& property, std::span<const std::string> tokens,
                                   std::span<const int> labels) {
  if (!property.applies(tokens)) throw std::invalid_argument("instance is outside the property domain");
  PropertyValue acc;
  for (int v : property.components(tokens, labels)) {
    if (v >= 0) acc = combine(acc, PropertyValue::Val(v));
  }
  return acc;
}

Augmentation::Augmentation(const LabelSet& labels, std::span<const DecomposableProperty> properties)
    : original_(labels), names_(labels.names()), after_(labels.size(), -1) {
  for (int y = 0; y < labels.size(); ++y) to_original_.push_back(y);
  if (!labels.has_other()) return;
  bool first_non_other = false;
  std::vector<bool> anchored(labels.size(), false);
  for (const auto& p : properties) {
    if (p.kind() == PropertyKind::kNextLabel) anchored[p.anchor()] = true;
    if (p.kind() == PropertyKind::kFirstNonOther) first_non_other = true;
  }
  for (int y = 0; y < labels.size(); ++y) {
    if (!anchored[y]) continue;
    after_[y] = size();
    names_.push_back("After-" + labels.name(y));
    to_original_.push_back(labels.other());
  }
  if (first_non_other) {
    after_start_ = size();
    names_.push_back("After-Start");
    to_original_.push_back(labels.other());
  }
}

bool Augmentation::allowed(int prev, int cur) const {
  if (cur == kEndLabel) return true;
  const int n = original_.size();
  if (cur < n && cur != original_.other()) return true;
  if (cur == after_start_) return prev == kStartLabel || prev == after_start_;
  if (cur >= n) {
    // After-X run continues or follows X.
    return prev >= 0 && to_original_[prev] != original_.other() ? after_[prev] == cur : prev == cur;
  }
  // Plain Other: only where no augmented label claims the position.
  if (prev == kStartLabel) return after_start_ < 0;
  if (prev >= n) return false;
  if (prev == original_.other()) return true;
  return after_[prev] < 0;
}

std::vector<int> Augmentation::relabel(std::span<const int> labels) const {
  std::vector<int> out(labels.begin(), labels.end());
  int context = after_start_ >= 0 ? after_start_ : -1;
  for (auto& y : out) {
    if (y < 0 || y >= original_.size()) throw RangeError("label id out of range");
    if (y == original_.other()) {
      if (context >= 0) y = context;
    } else {
      context = after_[y];
    }
  }
  return out;
}

std::vector<int> Augmentation::unrelabel(std::span<const int> labels) const {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int y : labels) {
    if (y < 0 || y >= size()) throw RangeError("augmented label id out of range");
    out.push_back(to_original_[y]);
  }
  return out;
}

Augmentation augment_labels(const LabelSet& labels, std::span<const DecomposableProperty> properties) {
  return Augmentation(labels, properties);
}

EdgeEvaluator::EdgeEvaluator(DecomposableProperty property, Augmentation augmentation)
    : property_(std::move(property)), aug_(std::move(augmentation)) {
  if (property_.kind() == PropertyKind::kNextLabel && aug_.original().has_other() &&
      aug_.after(property_.anchor()) < 0) {
    throw std::invalid_argument("augmentation lacks the After label for " + property_.name());
  }
  if (property_.kind() == PropertyKind::kFirstNonOther && aug_.original().has_other() && aug_.after_start() < 0) {
    throw std::invalid_argument("augmentation lacks the After-Start label");
  }
}

int EdgeEvaluator::Fire(std::span<const std::string> tokens, int part, int prev, int cur) const {
  const auto& p = property_;
  switch (p.kind()) {
    case PropertyKind::kTokenLabel:
      if (cur == kEndLabel || tokens[part] != p.token()) return -1;
      return aug_.to_original(cur);
    case PropertyKind::kNextLabel: {
      const int anchor = p.anchor();
      const int after = aug_.after(anchor);
      const bool leaves_anchor = prev == anchor && cur != anchor && (after < 0 || cur != after);
      const bool leaves_after = after >= 0 && prev == after && cur != after;
      if (!leaves_anchor && !leaves_after) return -1;
      return cur == kEndLabel ? p.end_value() : p.label_value(aug_.to_original(cur));
    }
    case PropertyKind::kFirstNonOther: {
      const int start = aug_.after_start();
      if (cur == kEndLabel || (prev != kStartLabel && prev != start) || cur == start) return -1;
      return p.label_value(aug_.to_original(cur));
    }
    case PropertyKind::kBeforeToken:
      if (cur != p.anchor() || prev == p.anchor()) return -1;
      return part == 0 ? p.start_value() : TokenValueOrThrow(p, tokens[part - 1]);
  }
  return -1;
}

PropertyValue EdgeEvaluator::Evaluate(std::span<const std::string> tokens, std::span<const int> labels) const {
  if (tokens.size() != labels.size()) throw DimensionError("tokens and labels differ in length");
  if (!property_.applies(tokens)) throw std::invalid_argument("instance is outside the property domain");
  const int t = static_cast<int>(labels.size());
  PropertyValue acc;
  for (int c = 0; c <= t; ++c) {
    const int prev = c == 0 ? kStartLabel : labels[c - 1];
    const int cur = c == t ? kEndLabel : labels[c];
    const int v = Fire(tokens, c, prev, cur);
    if (v >= 0) acc = combine(acc, PropertyValue::Val(v));
  }
  return acc;
}

}  // namespace symclique
