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

#ifndef SYMCLIQUE_PROPERTIES_HPP_
#define SYMCLIQUE_PROPERTIES_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symclique {

// A labeling-level property value: Empty (never fires), Bottom (conflicting
// firings) or Val(i) for the i-th element of the component range. The integer
// code is 0, 1 and 2 + i respectively.
class PropertyValue {
 public:
  static constexpr int kEmptyCode = 0;
  static constexpr int kBottomCode = 1;
  static constexpr int kFirstValueCode = 2;

  constexpr PropertyValue() = default;
  static constexpr PropertyValue Empty() { return PropertyValue(kEmptyCode); }
  static constexpr PropertyValue Bottom() { return PropertyValue(kBottomCode); }
  static constexpr PropertyValue Val(int index) { return PropertyValue(kFirstValueCode + index); }
  static constexpr PropertyValue FromCode(int code) { return PropertyValue(code); }

  constexpr bool is_empty() const { return code_ == kEmptyCode; }
  constexpr bool is_bottom() const { return code_ == kBottomCode; }
  constexpr bool has_value() const { return code_ >= kFirstValueCode; }
  constexpr int index() const { return code_ - kFirstValueCode; }
  constexpr int code() const { return code_; }

  friend constexpr bool operator==(PropertyValue, PropertyValue) = default;

 private:
  constexpr explicit PropertyValue(int code) : code_(code) {}
  int code_ = kEmptyCode;
};

// Empty is the identity, Bottom absorbs, equal values merge, distinct values conflict.
constexpr PropertyValue combine(PropertyValue a, PropertyValue b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  if (a.is_bottom() || b.is_bottom()) return PropertyValue::Bottom();
  return a == b ? a : PropertyValue::Bottom();
}

class LabelSet {
 public:
  LabelSet() = default;
  // `other` names the filler label, if the task has one.
  LabelSet(std::vector<std::string> names, std::optional<std::string> other = std::nullopt);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int id) const { return names_.at(id); }
  int other() const { return other_; }
  bool has_other() const { return other_ >= 0; }
  std::optional<int> find(std::string_view name) const;
  // Throws std::invalid_argument for unknown names.
  int index(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  int other_ = -1;
};

enum class PropertyKind { kTokenLabel, kNextLabel, kFirstNonOther, kBeforeToken };

std::string kind_name(PropertyKind kind);
PropertyKind parse_property_kind(std::string_view name);

class DecomposableProperty {
 public:
  // Label of every occurrence of `token`; applies to instances containing it.
  static DecomposableProperty TokenLabel(const LabelSet& labels, std::string token);
  // First non-Other label after each `anchor` segment, or End.
  static DecomposableProperty NextLabel(const LabelSet& labels, std::string_view anchor);
  // First non-Other label of the labeling.
  static DecomposableProperty FirstNonOther(const LabelSet& labels);
  // Token before each `anchor` segment, or Start at position 0.
  static DecomposableProperty BeforeToken(const LabelSet& labels, std::string_view anchor,
                                          std::vector<std::string> vocabulary);

  PropertyKind kind() const { return kind_; }
  int anchor() const { return anchor_; }
  const std::string& anchor_name() const { return anchor_name_; }
  const std::string& token() const { return token_; }
  std::string name() const;

  // Component range; sentinels (End, Start) are the last entry when present.
  const std::vector<std::string>& range() const { return range_; }
  int range_size() const { return static_cast<int>(range_.size()); }
  int label_value(int label) const { return label_to_range_.at(label); }
  int end_value() const { return sentinel_; }
  int start_value() const { return sentinel_; }
  // Range index of a token, or -1.
  int token_value(std::string_view token) const;

  bool applies(std::span<const std::string> tokens) const;

  // Per-position component values on an original labeling: a range index, or
  // -1 where the property does not fire.
  std::vector<int> components(std::span<const std::string> tokens, std::span<const int> labels) const;

 private:
  DecomposableProperty(PropertyKind kind, const LabelSet& labels);

  PropertyKind kind_;
  int num_labels_ = 0;
  int other_ = -1;
  int anchor_ = -1;
  std::string anchor_name_;
  std::string token_;
  std::vector<std::string> range_;
  std::vector<int> label_to_range_;
  std::unordered_map<std::string, int> token_to_range_;
  int sentinel_ = -1;
};

// Fold of the components under combine. Throws when the instance is outside the domain.
PropertyValue property_of_labeling(const DecomposableProperty& property, std::span<const std::string> tokens,
                                   std::span<const int> labels);

inline constexpr int kStartLabel = -1;
inline constexpr int kEndLabel = -2;

// Label set in which every Other token carries its left context: an Other run
// after X becomes After-X (when X anchors a NextLabel property) and an Other
// run before any other label becomes After-Start (when FirstNonOther is used).
// Original label ids are kept; the new labels follow them.
class Augmentation {
 public:
  Augmentation() = default;
  Augmentation(const LabelSet& labels, std::span<const DecomposableProperty> properties);

  const LabelSet& original() const { return original_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  int to_original(int label) const { return to_original_[label]; }
  int after(int original_label) const { return after_[original_label]; }
  int after_start() const { return after_start_; }
  bool is_identity() const { return size() == original_.size(); }

  // Whether `cur` may follow `prev`; prev may be kStartLabel.
  bool allowed(int prev, int cur) const;
  std::vector<int> relabel(std::span<const int> labels) const;
  std::vector<int> unrelabel(std::span<const int> labels) const;

 private:
  LabelSet original_;
  std::vector<std::string> names_;
  std::vector<int> to_original_;
  std::vector<int> after_;
  int after_start_ = -1;
};

Augmentation augment_labels(const LabelSet& labels, std::span<const DecomposableProperty> properties);

// A property's component restated on one edge (y_{c-1}, y_c) of an augmented
// labeling. Parts run over c = 0..T; part 0 has prev = kStartLabel and part T
// has cur = kEndLabel.
class EdgeEvaluator {
 public:
  EdgeEvaluator(DecomposableProperty property, Augmentation augmentation);

  const DecomposableProperty& property() const { return property_; }
  // Range index, or -1 when the part does not fire.
  int Fire(std::span<const std::string> tokens, int part, int prev, int cur) const;
  // Fold of Fire over every part of an augmented labeling.
  PropertyValue Evaluate(std::span<const std::string> tokens, std::span<const int> labels) const;

 private:
  DecomposableProperty property_;
  Augmentation aug_;
};

}  // namespace symclique

#endif  // SYMCLIQUE_PROPERTIES_HPP_
