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

#include "symclique/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace symclique {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckMonotoneRows(const Table& f, const char* what) {
  for (std::size_t v = 0; v < f.rows(); ++v) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      if (!std::isfinite(f(v, c))) throw std::invalid_argument(std::string(what) + ": non-finite entry");
      if (c > 0 && f(v, c) < f(v, c - 1)) {
        throw std::invalid_argument(std::string(what) + ": f_v must be non-decreasing");
      }
    }
  }
}

void CheckLambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("potential scale must be finite and non-negative");
  }
}

double XLogX(int c) { return c > 0 ? c * std::log(static_cast<double>(c)) : 0.0; }

}  // namespace

CountHistogram histogram_of(std::span<const ValueId> values, int num_values) {
  if (num_values < 0) throw DimensionError("negative number of values");
  CountHistogram hist{std::vector<int>(num_values, 0), static_cast<int>(values.size())};
  for (ValueId v : values) {
    if (v < 0 || v >= num_values) throw RangeError("value " + std::to_string(v) + " outside [0, R)");
    ++hist.counts[v];
  }
  return hist;
}

CliquePotential::CliquePotential(int num_values, Form form)
    : num_values_(num_values), form_(std::move(form)) {
  if (num_values_ < 1) throw DimensionError("potential needs at least one value");
  std::visit(Overloaded{
                 [](const LinearMakespan& p) { CheckLambda(p.lambda); },
                 [](const SquareMakespan& p) { CheckLambda(p.lambda); },
                 [](const Potts& p) { CheckLambda(p.lambda); },
                 [](const Entropy& p) { CheckLambda(p.lambda); },
                 [this](const MaxLabelTables& p) {
                   if (p.f.rows() != static_cast<std::size_t>(num_values_) || p.f.cols() < 1)
                     throw DimensionError("max-label table must be R x (n+1)");
                   CheckMonotoneRows(p.f, "max-label table");
                 },
                 [this](const AdditiveTables& p) {
                   if (p.f.rows() != static_cast<std::size_t>(num_values_) || p.f.cols() < 1)
                     throw DimensionError("additive table must be R x (n+1)");
                   CheckMonotoneRows(p.f, "additive table");
                 },
                 [this](const LinearMajority& p) {
                   if (p.w.rows() != static_cast<std::size_t>(num_values_) ||
                       p.w.cols() != static_cast<std::size_t>(num_values_))
                     throw DimensionError("majority weights must be R x R");
                   for (double x : p.w.data())
                     if (!std::isfinite(x)) throw std::invalid_argument("majority weights must be finite");
                 },
             },
             form_);
}

CliquePotential CliquePotential::MakePotts(int r, double lambda) { return {r, Potts{lambda}}; }
CliquePotential CliquePotential::MakeEntropy(int r, double lambda) { return {r, Entropy{lambda}}; }
CliquePotential CliquePotential::MakeLinearMakespan(int r, double lambda) {
  return {r, LinearMakespan{lambda}};
}
CliquePotential CliquePotential::MakeSquareMakespan(int r, double lambda) {
  return {r, SquareMakespan{lambda}};
}
CliquePotential CliquePotential::MakeMaxLabelTables(Table f) {
  const int r = static_cast<int>(f.rows());
  return {r, MaxLabelTables{std::move(f)}};
}
CliquePotential CliquePotential::MakeAdditiveTables(Table f) {
  const int r = static_cast<int>(f.rows());
  return {r, AdditiveTables{std::move(f)}};
}
CliquePotential CliquePotential::MakeMajority(Table w) {
  const int r = static_cast<int>(w.rows());
  return {r, LinearMajority{std::move(w)}};
}

PotentialFamily CliquePotential::family() const {
  return std::visit(Overloaded{
                        [](const LinearMakespan&) { return PotentialFamily::kMaxLabel; },
                        [](const SquareMakespan&) { return PotentialFamily::kMaxLabel; },
                        [](const MaxLabelTables&) { return PotentialFamily::kMaxLabel; },
                        [](const Potts&) { return PotentialFamily::kAdditive; },
                        [](const Entropy&) { return PotentialFamily::kAdditive; },
                        [](const AdditiveTables&) { return PotentialFamily::kAdditive; },
                        [](const LinearMajority&) { return PotentialFamily::kMajority; },
                    },
                    form_);
}

std::string CliquePotential::name() const {
  return std::visit(Overloaded{
                        [](const LinearMakespan&) { return std::string("makespan"); },
                        [](const SquareMakespan&) { return std::string("makespan2"); },
                        [](const MaxLabelTables&) { return std::string("maxlabel-table"); },
                        [](const Potts&) { return std::string("potts"); },
                        [](const Entropy&) { return std::string("entropy"); },
                        [](const AdditiveTables&) { return std::string("additive-table"); },
                        [](const LinearMajority&) { return std::string("majority"); },
                    },
                    form_);
}

CliquePotential CliquePotential::WithExcluded(std::vector<bool> mask) const {
  if (mask.size() != static_cast<std::size_t>(num_values_)) throw DimensionError("exclusion mask size != R");
  CliquePotential copy = *this;
  copy.excluded_ = std::move(mask);
  return copy;
}

bool CliquePotential::has_exclusions() const {
  return std::find(excluded_.begin(), excluded_.end(), true) != excluded_.end();
}

std::optional<int> CliquePotential::max_count() const {
  if (const auto* t = std::get_if<MaxLabelTables>(&form_)) return static_cast<int>(t->f.cols()) - 1;
  if (const auto* t = std::get_if<AdditiveTables>(&form_)) return static_cast<int>(t->f.cols()) - 1;
  return std::nullopt;
}

double CliquePotential::Evaluate(const CountHistogram& hist) const {
  if (hist.num_values() != num_values_) {
    throw DimensionError("histogram has " + std::to_string(hist.num_values()) + " values, potential has " +
                         std::to_string(num_values_));
  }
  int total = 0;
  for (int c : hist.counts) {
    if (c < 0) throw RangeError("negative count");
    total += c;
  }
  if (total != hist.n) throw DimensionError("histogram counts do not sum to n");
  if (auto cap = max_count(); cap && hist.n > *cap) throw DimensionError("count exceeds potential table length");
  return EvaluateCounts(hist.counts);
}

double CliquePotential::Term(ValueId v, int count) const {
  if (excluded(v)) count = 0;
  return std::visit(Overloaded{
                        [&](const LinearMakespan& p) { return p.lambda * count; },
                        [&](const SquareMakespan& p) { return p.lambda * count * static_cast<double>(count); },
                        [&](const MaxLabelTables& p) { return p.f(v, count); },
                        [&](const Potts& p) { return p.lambda * count * static_cast<double>(count); },
                        [&](const Entropy& p) { return p.lambda * XLogX(count); },
                        [&](const AdditiveTables& p) { return p.f(v, count); },
                        [&](const LinearMajority&) -> double {
                          throw std::logic_error("majority potentials have no per-value terms");
                        },
                    },
                    form_);
}

std::optional<ValueId> CliquePotential::MajorityOf(std::span<const int> counts) const {
  std::optional<ValueId> best;
  for (int v = 0; v < static_cast<int>(counts.size()); ++v) {
    if (excluded(v) || counts[v] <= 0) continue;
    if (!best || counts[v] > counts[*best]) best = v;
  }
  return best;
}

double CliquePotential::MajorityWeight(ValueId a, ValueId v) const {
  const auto& maj = std::get<LinearMajority>(form_);
  return excluded(v) ? 0.0 : maj.w(a, v);
}

double CliquePotential::EvaluateCounts(std::span<const int> counts) const {
  switch (family()) {
    case PotentialFamily::kMaxLabel: {
      double best = kNegInf;
      for (int v = 0; v < num_values_; ++v) best = std::max(best, Term(v, counts[v]));
      return best;
    }
    case PotentialFamily::kAdditive: {
      double sum = 0.0;
      for (int v = 0; v < num_values_; ++v) sum += Term(v, counts[v]);
      return sum;
    }
    case PotentialFamily::kMajority: {
      const auto a = MajorityOf(counts);
      if (!a) return 0.0;
      double sum = 0.0;
      for (int v = 0; v < num_values_; ++v) sum += MajorityWeight(*a, v) * counts[v];
      return sum;
    }
  }
  return 0.0;
}

double CliquePotential::MagnitudeBound(int n) const {
  const double dn = n;
  return std::visit(Overloaded{
                        [&](const LinearMakespan& p) { return p.lambda * dn; },
                        [&](const SquareMakespan& p) { return p.lambda * dn * dn; },
                        [&](const Potts& p) { return p.lambda * dn * dn; },
                        [&](const Entropy& p) { return p.lambda * XLogX(n); },
                        [&](const MaxLabelTables& p) {
                          double m = 0.0;
                          for (double x : p.f.data()) m = std::max(m, std::abs(x));
                          return m;
                        },
                        [&](const AdditiveTables& p) {
                          double m = 0.0;
                          for (double x : p.f.data()) m = std::max(m, std::abs(x));
                          return m * num_values_;
                        },
                        [&](const LinearMajority& p) {
                          double m = 0.0;
                          for (double x : p.w.data()) m = std::max(m, std::abs(x));
                          return m * dn;
                        },
                    },
                    form_);
}

HistogramScorer::HistogramScorer(const CliquePotential& potential, std::vector<int> counts)
    : potential_(&potential), family_(potential.family()), counts_(std::move(counts)) {
  if (counts_.size() != static_cast<std::size_t>(potential.num_values())) {
    throw DimensionError("scorer counts size != R");
  }
  if (family_ == PotentialFamily::kAdditive) {
    for (int v = 0; v < potential.num_values(); ++v) additive_sum_ += potential.Term(v, counts_[v]);
  } else if (family_ == PotentialFamily::kMaxLabel) {
    for (int v = 0; v < potential.num_values(); ++v) terms_.insert(potential.Term(v, counts_[v]));
  }
}

void HistogramScorer::Move(ValueId from, ValueId to) {
  if (from == to) return;
  const CliquePotential& p = *potential_;
  switch (family_) {
    case PotentialFamily::kAdditive:
      additive_sum_ += p.Term(from, counts_[from] - 1) - p.Term(from, counts_[from]);
      additive_sum_ += p.Term(to, counts_[to] + 1) - p.Term(to, counts_[to]);
      break;
    case PotentialFamily::kMaxLabel:
      terms_.erase(terms_.find(p.Term(from, counts_[from])));
      terms_.insert(p.Term(from, counts_[from] - 1));
      terms_.erase(terms_.find(p.Term(to, counts_[to])));
      terms_.insert(p.Term(to, counts_[to] + 1));
      break;
    case PotentialFamily::kMajority:
      break;
  }
  --counts_[from];
  ++counts_[to];
}

double HistogramScorer::score() const {
  switch (family_) {
    case PotentialFamily::kAdditive:
      return additive_sum_;
    case PotentialFamily::kMaxLabel:
      return *terms_.rbegin();
    case PotentialFamily::kMajority:
      return potential_->EvaluateCounts(counts_);
  }
  return 0.0;
}

}  // namespace symclique
