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

#include "symclique/synthgen.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace symclique {

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1u) | 1u) {
  Next();
  state_ += seed;
  Next();
}

std::uint32_t Pcg32::Next() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

double Pcg32::Uniform() {
  const std::uint64_t hi = Next() >> 5;  // 27 bits
  const std::uint64_t lo = Next() >> 6;  // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

std::uint32_t Pcg32::Below(std::uint32_t bound) {
  if (bound == 0) throw std::invalid_argument("Below needs a positive bound");
  const std::uint32_t threshold = (0u - bound) % bound;
  while (true) {
    const std::uint32_t x = Next();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

double ParseNumber(std::string_view text) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

}  // namespace

LambdaSweep LambdaSweep::Parse(std::string_view text, bool open_upper) {
  LambdaSweep sweep;
  sweep.open_upper = open_upper;
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    sweep.lo = sweep.hi = ParseNumber(text);
    sweep.step = 1.0;
    sweep.open_upper = false;
    return sweep;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) throw std::invalid_argument("lambda range must be a:b:step");
  sweep.lo = ParseNumber(text.substr(0, first));
  sweep.hi = ParseNumber(text.substr(first + 1, second - first - 1));
  sweep.step = ParseNumber(text.substr(second + 1));
  if (!(sweep.step > 0.0)) throw std::invalid_argument("lambda step must be positive");
  if (sweep.hi < sweep.lo) throw std::invalid_argument("lambda range is empty");
  return sweep;
}

std::vector<double> LambdaSweep::Values() const {
  // Count steps on a rounded grid so 0.7:1.1:0.02 has exactly 20 open points.
  const double span = (hi - lo) / step;
  const double nearest = std::round(span);
  const bool on_grid = std::abs(span - nearest) < 1e-9 * (1.0 + std::abs(span));
  long last = on_grid ? static_cast<long>(nearest) : static_cast<long>(std::floor(span));
  if (on_grid && open_upper) --last;
  std::vector<double> out;
  for (long i = 0; i <= last; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::string family_name(CliqueFamily family) {
  switch (family) {
    case CliqueFamily::kPotts: return "potts";
    case CliqueFamily::kEntropy: return "entropy";
    case CliqueFamily::kMakespan: return "makespan";
    case CliqueFamily::kMakespan2: return "makespan2";
    case CliqueFamily::kMajDense: return "maj-dense";
    case CliqueFamily::kMajSparse: return "maj-sparse";
    case CliqueFamily::kMaxLabelTable: return "maxlabel-table";
    case CliqueFamily::kAdditiveTable: return "additive-table";
  }
  return "unknown";
}

CliqueFamily parse_family(std::string_view name) {
  for (auto f : {CliqueFamily::kPotts, CliqueFamily::kEntropy, CliqueFamily::kMakespan, CliqueFamily::kMakespan2,
                 CliqueFamily::kMajDense, CliqueFamily::kMajSparse, CliqueFamily::kMaxLabelTable,
                 CliqueFamily::kAdditiveTable}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

namespace {

Table MonotoneTables(Pcg32& rng, int r, int n, double lambda) {
  Table f(r, n + 1);
  for (int v = 0; v < r; ++v) {
    double acc = 0.0;
    for (int c = 0; c <= n; ++c) {
      f(v, c) = acc;
      acc += rng.Uniform(0.0, 2.0 * lambda);
    }
  }
  return f;
}

}  // namespace

GeneratedProblem gen_clique_problem(CliqueFamily family, int n, int r, double lambda, std::uint64_t seed, int id) {
  if (n < 1 || r < 2) throw std::invalid_argument("need n >= 1 and R >= 2");
  Pcg32 rng(seed);
  Table psi(n, r);
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < r; ++v) psi(i, v) = rng.Uniform(0.0, 2.0);
  }
  auto potential = [&]() -> CliquePotential {
    switch (family) {
      case CliqueFamily::kPotts: return CliquePotential::MakePotts(r, lambda);
      case CliqueFamily::kEntropy: return CliquePotential::MakeEntropy(r, lambda);
      case CliqueFamily::kMakespan: return CliquePotential::MakeLinearMakespan(r, lambda);
      case CliqueFamily::kMakespan2: return CliquePotential::MakeSquareMakespan(r, lambda);
      case CliqueFamily::kMaxLabelTable: return CliquePotential::MakeMaxLabelTables(MonotoneTables(rng, r, n, lambda));
      case CliqueFamily::kAdditiveTable: return CliquePotential::MakeAdditiveTables(MonotoneTables(rng, r, n, lambda));
      case CliqueFamily::kMajDense:
      case CliqueFamily::kMajSparse: {
        Table w(r, r);
        const bool sparse = family == CliqueFamily::kMajSparse;
        for (int a = 0; a < r; ++a) {
          for (int b = a; b < r; ++b) {
            double x = rng.Uniform(0.0, 2.0 * lambda);
            if (sparse) {
              if (rng.Uniform() < 0.7) x = 0.0;
            } else if (a == b) {
              x = lambda;
            }
            w(a, b) = w(b, a) = x;
          }
        }
        return CliquePotential::MakeMajority(std::move(w));
      }
    }
    throw std::invalid_argument("unknown family");
  };
  CliquePotential pot = potential();
  return {id, seed, family, lambda, CliqueProblem(std::move(psi), std::move(pot))};
}

std::vector<GeneratedProblem> gen_clique_dataset(const CliqueDatasetSpec& spec) {
  if (spec.per_lambda < 1) throw std::invalid_argument("per_lambda must be at least 1");
  std::vector<GeneratedProblem> out;
  int id = 0;
  for (double lambda : spec.lambdas.Values()) {
    const double used = spec.conll_scaling ? 0.9 / spec.n : lambda;
    for (int j = 0; j < spec.per_lambda; ++j, ++id) {
      out.push_back(gen_clique_problem(spec.family, spec.n, spec.r, used, derive_seed(spec.seed, id), id));
    }
  }
  return out;
}

namespace {

std::string Lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void CheckCorpusSpec(const CorpusSpec& spec) {
  if (spec.num_domains < 1 || spec.instances_per_domain < 1) throw std::invalid_argument("corpus must be non-empty");
  if (spec.fields.size() < 2) throw std::invalid_argument("corpus needs at least two fields");
  if (spec.templates.empty()) throw std::invalid_argument("corpus needs at least one template");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");
  if (!(spec.ambiguous_fraction >= 0.0 && spec.ambiguous_fraction <= 1.0)) {
    throw std::invalid_argument("ambiguous fraction must lie in [0, 1]");
  }
  if (!(spec.margin > 0.0)) throw std::invalid_argument("margin must be positive");
  if (spec.vocabulary_per_field < 1 || spec.max_field_length < 1) throw std::invalid_argument("bad field shape");
  if (!(spec.separator_probability >= 0.0 && spec.separator_probability < 1.0)) {
    throw std::invalid_argument("separator probability must lie in [0, 1)");
  }
}

}  // namespace

Corpus gen_corpus(const CorpusSpec& spec) {
  CheckCorpusSpec(spec);
  std::vector<std::string> names = spec.fields;
  names.push_back("Other");
  Corpus corpus{LabelSet(names, "Other"), {}, {}, {}, {}};
  const LabelSet& labels = corpus.labels;
  const int other = labels.other();
  const int num_labels = labels.size();
  for (const auto& order : spec.templates) {
    if (order.empty()) throw std::invalid_argument("empty template");
    for (const auto& f : order) {
      if (labels.index(f) == other) throw std::invalid_argument("templates list fields only");
    }
  }
  const auto title = labels.find("Title");

  for (int d = 0; d < spec.num_domains; ++d) {
    const std::uint64_t domain_seed = derive_seed(spec.seed, d);
    Pcg32 domain_rng(domain_seed);
    const auto& order = spec.templates[domain_rng.Below(static_cast<std::uint32_t>(spec.templates.size()))];
    corpus.domain_templates.push_back(order);
    std::vector<int> picks(spec.instances_per_domain);
    for (int j = 0; j < spec.instances_per_domain; ++j) picks[j] = j;
    for (int j = spec.instances_per_domain - 1; j > 0; --j) {
      std::swap(picks[j], picks[domain_rng.Below(static_cast<std::uint32_t>(j + 1))]);
    }
    const int num_ambiguous = static_cast<int>(spec.ambiguous_fraction * spec.instances_per_domain);
    std::vector<bool> ambiguous(spec.instances_per_domain, false);
    for (int j = 0; j < num_ambiguous; ++j) ambiguous[picks[j]] = true;

    for (int j = 0; j < spec.instances_per_domain; ++j) {
      Pcg32 rng(derive_seed(domain_seed, j));
      std::vector<std::string> tokens;
      std::vector<int> gold;
      // Position of the first token of each field, in template order.
      std::vector<int> field_start;
      for (std::size_t f = 0; f < order.size(); ++f) {
        if (f > 0 && rng.Uniform() < spec.separator_probability) {
          tokens.push_back(",");
          gold.push_back(other);
        }
        const int label = labels.index(order[f]);
        field_start.push_back(static_cast<int>(tokens.size()));
        const int len = 1 + static_cast<int>(rng.Below(static_cast<std::uint32_t>(spec.max_field_length)));
        for (int k = 0; k < len; ++k) {
          tokens.push_back(Lower(order[f]) + "_" +
                           std::to_string(rng.Below(static_cast<std::uint32_t>(spec.vocabulary_per_field))));
          gold.push_back(label);
        }
      }
      const int t = static_cast<int>(tokens.size());
      ChainInstance inst;
      inst.id = "d" + std::to_string(d) + "_i" + std::to_string(j);
      inst.tokens = tokens;
      inst.node = Table(t, num_labels);
      for (int c = 0; c < t; ++c) {
        for (int y = 0; y < num_labels; ++y) {
          const double u = rng.Uniform();
          inst.node(c, y) = y == gold[c] ? 1.0 + spec.noise * u : 2.0 * spec.noise * u;
        }
      }
      for (int c = 0; c + 1 < t; ++c) inst.edge.emplace_back(num_labels, num_labels, 0.0);
      if (ambiguous[j]) {
        // The field after Title, or the first field when Title is last or absent.
        std::size_t target = 0;
        for (std::size_t f = 0; f + 1 < order.size(); ++f) {
          if (title && labels.index(order[f]) == *title) target = f + 1;
        }
        const int pos = field_start[target];
        std::vector<int> confusers;
        for (int y = 0; y < num_labels; ++y) {
          if (y != other && y != gold[pos] && (!title || y != *title)) confusers.push_back(y);
        }
        if (confusers.empty()) throw std::invalid_argument("no label available to confuse");
        const int wrong = confusers[rng.Below(static_cast<std::uint32_t>(confusers.size()))];
        for (int y = 0; y < num_labels; ++y) inst.node(pos, y) = 0.0;
        inst.node(pos, gold[pos]) = 1.0;
        inst.node(pos, wrong) = 1.0 + spec.margin;
      }
      inst.gold = gold;
      corpus.instances.push_back(std::move(inst));
      corpus.domain.push_back(d);
      corpus.ambiguous.push_back(ambiguous[j]);
    }
  }
  return corpus;
}

}  // namespace symclique
