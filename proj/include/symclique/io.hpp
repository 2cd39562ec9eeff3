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

#ifndef SYMCLIQUE_IO_HPP_
#define SYMCLIQUE_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "symclique/chain_mrf.hpp"
#include "symclique/cluster_graph.hpp"
#include "symclique/synthgen.hpp"

namespace symclique {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest text that parses back to the same double; dot decimal, no locale.
std::string format_number(double x);
double parse_number(std::string_view text);

// Problem files hold a sequence of blocks:
//   problem <id> <seed>
//   <n> <R> <family> <lambda>
//   n rows of R psi values
//   R rows of R weights (majority families) or R rows of n+1 values (table families)
// Blank lines and lines starting with '#' are ignored.
void write_problems(std::ostream& out, const std::vector<GeneratedProblem>& problems);
std::vector<GeneratedProblem> read_problems(std::istream& in);
std::vector<GeneratedProblem> read_problems_file(const std::filesystem::path& path);

// Instance files:
//   instance <id>
//   labels <|Y|>
//   tokens <x_1> ... <x_T>
//   gold <y_1> ... <y_T>          (optional, label ids)
//   node, then T rows of |Y| values
//   edge, then T-1 blocks of |Y| rows of |Y| values
void write_instance(std::ostream& out, const ChainInstance& instance);
ChainInstance read_instance(std::istream& in);

// Collective-model manifest:
//   labels <name> ...
//   other <name>                  (optional)
//   instance <path>               (relative to the manifest's directory)
//   property kind=<k> [anchor=<a>] potential=<p> lambda=<x>
//   option <key>=<value> ...      (rounds, exclude, restrict, solver, messages, beam, damping, threads)
struct Manifest {
  std::vector<std::string> labels;
  std::string other;
  std::vector<std::string> instance_paths;
  std::vector<PropertySpec> properties;
  CollectiveOptions options;
};

void write_manifest(std::ostream& out, const Manifest& manifest);
Manifest read_manifest(std::istream& in);

struct LoadedModel {
  Manifest manifest;
  LabelSet labels;
  std::vector<ChainInstance> instances;
};

LoadedModel load_model(const std::filesystem::path& manifest_path);

}  // namespace symclique

#endif  // SYMCLIQUE_IO_HPP_
