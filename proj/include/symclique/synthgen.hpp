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

#ifndef SYMCLIQUE_SYNTHGEN_HPP_
#define SYMCLIQUE_SYNTHGEN_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "symclique/chain_mrf.hpp"
#include "symclique/clique_infer.hpp"
#include "symclique/properties.hpp"

namespace symclique {

// PCG32 (XSH-RR output, 64-bit state). Fixed across platforms.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

  std::uint32_t Next();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound).
  std::uint32_t Below(std::uint32_t bound);

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

// splitmix64 of (base, index); seeds independent per-item streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Arithmetic sweep lo, lo+step, ... up to hi (inclusive unless open_upper).
struct LambdaSweep {
  double lo = 1.0;
  double hi = 1.0;
  double step = 1.0;
  bool open_upper = false;

  // Parses "a:b:step" or a single number.
  static LambdaSweep Parse(std::string_view text, bool open_upper = false);
  std::vector<double> Values() const;
};

enum class CliqueFamily { kPotts, kEntropy, kMakespan, kMakespan2, kMajDense, kMajSparse, kMaxLabelTable, kAdditiveTable };

std::string family_name(CliqueFamily family);
CliqueFamily parse_family(std::string_view name);

struct CliqueDatasetSpec {
  CliqueFamily family = CliqueFamily::kPotts;
  int n = 100;
  int r = 24;
  LambdaSweep lambdas;
  int per_lambda = 25;
  std::uint64_t seed = 1;
  // Replaces every lambda by 0.9 / n.
  bool conll_scaling = false;
};

struct GeneratedProblem {
  int id = 0;
  std::uint64_t seed = 0;
  CliqueFamily family = CliqueFamily::kPotts;
  double lambda = 0.0;
  CliqueProblem problem;
};

// Problem j uses the stream derive_seed(spec.seed, j); psi is uniform on [0, 2].
std::vector<GeneratedProblem> gen_clique_dataset(const CliqueDatasetSpec& spec);
GeneratedProblem gen_clique_problem(CliqueFamily family, int n, int r, double lambda, std::uint64_t seed, int id = 0);

// Planted-template citation corpus. Every domain draws one field order from
// `templates`; its instances follow that order with random field lengths and
// optional Other separators.
struct CorpusSpec {
  int num_domains = 4;
  int instances_per_domain = 8;
  // Field labels; Other is appended as the filler label.
  std::vector<std::string> fields = {"Title", "Author", "Venue", "Date"};
  std::vector<std::vector<std::string>> templates = {
      {"Author", "Title", "Venue", "Date"},
      {"Title", "Author", "Date", "Venue"},
      {"Author", "Date", "Title", "Venue"},
      {"Title", "Venue", "Author", "Date"},
  };
  int vocabulary_per_field = 20;
  int max_field_length = 3;
  double separator_probability = 0.3;
  // Node potentials: gold 1 + noise*u, other labels 2*noise*u, u ~ U[0, 1).
  double noise = 0.3;
  // Share of each domain's instances whose first token after the Title field
  // prefers a wrong field by `margin`.
  double ambiguous_fraction = 0.25;
  double margin = 0.1;
  std::uint64_t seed = 1;
};

struct Corpus {
  LabelSet labels;
  std::vector<ChainInstance> instances;  // gold set on every instance
  std::vector<int> domain;
  std::vector<bool> ambiguous;
  std::vector<std::vector<std::string>> domain_templates;
};

// Domain d uses derive_seed(spec.seed, d); instance j of it derive_seed of that and j.
Corpus gen_corpus(const CorpusSpec& spec);

}  // namespace symclique

#endif  // SYMCLIQUE_SYNTHGEN_HPP_
