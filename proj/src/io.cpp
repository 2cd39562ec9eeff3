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

#include "symclique/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace symclique {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

double parse_number(std::string_view text) {
  double x = 0.0;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return kNegInf;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

namespace {

int ParseInt(std::string_view text) {
  int x = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("not an integer: '" + std::string(text) + "'");
  }
  return x;
}

std::uint64_t ParseU64(std::string_view text) {
  std::uint64_t x = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("not an unsigned integer: '" + std::string(text) + "'");
  }
  return x;
}

// Tokenized, comment-free lines with line numbers for messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ss(line);
      fields.clear();
      for (std::string f; ss >> f;) fields.push_back(f);
      if (fields.empty() || fields[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  template <class F>
  auto Wrap(F&& f) {
    try {
      return f();
    } catch (const ParseError& e) {
      Fail(e.what());
    } catch (const std::exception& e) {
      Fail(e.what());
    }
  }

  std::vector<std::string> Require(const char* what) {
    std::vector<std::string> fields;
    if (!Next(fields)) Fail(std::string("unexpected end of input, expected ") + what);
    return fields;
  }

  std::vector<double> Row(std::size_t width, const char* what) {
    const auto fields = Require(what);
    if (fields.size() != width) {
      Fail(std::string(what) + " row has " + std::to_string(fields.size()) + " values, expected " +
           std::to_string(width));
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(Wrap([&] { return parse_number(f); }));
    return row;
  }

  Table Rows(std::size_t rows, std::size_t cols, const char* what) {
    Table t(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = Row(cols, what);
      for (std::size_t c = 0; c < cols; ++c) t(r, c) = row[c];
    }
    return t;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError("line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

bool IsMajority(CliqueFamily f) { return f == CliqueFamily::kMajDense || f == CliqueFamily::kMajSparse; }
bool IsTable(CliqueFamily f) { return f == CliqueFamily::kMaxLabelTable || f == CliqueFamily::kAdditiveTable; }

void WriteRow(std::ostream& out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << format_number(row[i]);
  out << '\n';
}

void WriteTable(std::ostream& out, const Table& t) {
  for (std::size_t r = 0; r < t.rows(); ++r) WriteRow(out, t.row(r));
}

bool HasSpace(const std::string& s) {
  return s.empty() || s.find_first_of(" \t\r\n") != std::string::npos;
}

}  // namespace

void write_problems(std::ostream& out, const std::vector<GeneratedProblem>& problems) {
  for (const auto& g : problems) {
    const auto& p = g.problem;
    out << "problem " << g.id << ' ' << g.seed << '\n';
    out << p.n() << ' ' << p.num_values() << ' ' << family_name(g.family) << ' ' << format_number(g.lambda) << '\n';
    WriteTable(out, p.psi());
    const auto& form = p.potential().form();
    if (IsMajority(g.family)) WriteTable(out, std::get<LinearMajority>(form).w);
    if (g.family == CliqueFamily::kMaxLabelTable) WriteTable(out, std::get<MaxLabelTables>(form).f);
    if (g.family == CliqueFamily::kAdditiveTable) WriteTable(out, std::get<AdditiveTables>(form).f);
  }
}

std::vector<GeneratedProblem> read_problems(std::istream& in) {
  LineReader reader(in);
  std::vector<GeneratedProblem> out;
  std::vector<std::string> head;
  while (reader.Next(head)) {
    if (head.size() != 3 || head[0] != "problem") reader.Fail("expected 'problem <id> <seed>'");
    const int id = reader.Wrap([&] { return ParseInt(head[1]); });
    const std::uint64_t seed = reader.Wrap([&] { return ParseU64(head[2]); });
    const auto shape = reader.Require("problem header");
    if (shape.size() != 4) reader.Fail("expected '<n> <R> <family> <lambda>'");
    const int n = reader.Wrap([&] { return ParseInt(shape[0]); });
    const int r = reader.Wrap([&] { return ParseInt(shape[1]); });
    if (n < 1 || r < 2) reader.Fail("need n >= 1 and R >= 2");
    const CliqueFamily family = reader.Wrap([&] { return parse_family(shape[2]); });
    const double lambda = reader.Wrap([&] { return parse_number(shape[3]); });
    Table psi = reader.Rows(n, r, "psi");
    auto pot = reader.Wrap([&]() -> CliquePotential {
      switch (family) {
        case CliqueFamily::kPotts: return CliquePotential::MakePotts(r, lambda);
        case CliqueFamily::kEntropy: return CliquePotential::MakeEntropy(r, lambda);
        case CliqueFamily::kMakespan: return CliquePotential::MakeLinearMakespan(r, lambda);
        case CliqueFamily::kMakespan2: return CliquePotential::MakeSquareMakespan(r, lambda);
        default: return CliquePotential::MakePotts(r, 0.0);
      }
    });
    if (IsMajority(family)) {
      Table w = reader.Rows(r, r, "majority weight");
      pot = reader.Wrap([&] { return CliquePotential::MakeMajority(std::move(w)); });
    } else if (IsTable(family)) {
      Table f = reader.Rows(r, n + 1, "potential table");
      pot = reader.Wrap([&] {
        return family == CliqueFamily::kMaxLabelTable ? CliquePotential::MakeMaxLabelTables(std::move(f))
                                                      : CliquePotential::MakeAdditiveTables(std::move(f));
      });
    }
    out.push_back(reader.Wrap([&] {
      return GeneratedProblem{id, seed, family, lambda, CliqueProblem(std::move(psi), std::move(pot))};
    }));
  }
  return out;
}

std::vector<GeneratedProblem> read_problems_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_problems(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_instance(std::ostream& out, const ChainInstance& instance) {
  instance.Validate();
  if (HasSpace(instance.id)) throw std::invalid_argument("instance id must be a single word");
  out << "instance " << instance.id << '\n';
  out << "labels " << instance.num_labels() << '\n';
  out << "tokens";
  for (const auto& t : instance.tokens) {
    if (HasSpace(t)) throw std::invalid_argument("tokens must be non-empty and free of whitespace");
    out << ' ' << t;
  }
  out << '\n';
  if (instance.gold) {
    out << "gold";
    for (int g : *instance.gold) out << ' ' << g;
    out << '\n';
  }
  out << "node\n";
  WriteTable(out, instance.node);
  out << "edge\n";
  for (const auto& e : instance.edge) WriteTable(out, e);
}

ChainInstance read_instance(std::istream& in) {
  LineReader reader(in);
  ChainInstance inst;
  auto line = reader.Require("'instance <id>'");
  if (line.size() != 2 || line[0] != "instance") reader.Fail("expected 'instance <id>'");
  inst.id = line[1];
  line = reader.Require("'labels <count>'");
  if (line.size() != 2 || line[0] != "labels") reader.Fail("expected 'labels <count>'");
  const int y = reader.Wrap([&] { return ParseInt(line[1]); });
  if (y < 1) reader.Fail("label count must be positive");
  line = reader.Require("'tokens ...'");
  if (line.size() < 2 || line[0] != "tokens") reader.Fail("expected 'tokens' with at least one token");
  inst.tokens.assign(line.begin() + 1, line.end());
  const std::size_t t = inst.tokens.size();
  line = reader.Require("'gold' or 'node'");
  if (line[0] == "gold") {
    if (line.size() != t + 1) reader.Fail("gold needs one label per token");
    std::vector<int> gold;
    for (std::size_t i = 1; i < line.size(); ++i) gold.push_back(reader.Wrap([&] { return ParseInt(line[i]); }));
    inst.gold = std::move(gold);
    line = reader.Require("'node'");
  }
  if (line.size() != 1 || line[0] != "node") reader.Fail("expected 'node'");
  inst.node = reader.Rows(t, y, "node");
  line = reader.Require("'edge'");
  if (line.size() != 1 || line[0] != "edge") reader.Fail("expected 'edge'");
  for (std::size_t c = 0; c + 1 < t; ++c) inst.edge.push_back(reader.Rows(y, y, "edge"));
  std::vector<std::string> extra;
  if (reader.Next(extra)) reader.Fail("unexpected content after the edge tables");
  reader.Wrap([&] {
    inst.Validate();
    return 0;
  });
  return inst;
}

void write_manifest(std::ostream& out, const Manifest& m) {
  out << "labels";
  for (const auto& l : m.labels) out << ' ' << l;
  out << '\n';
  if (!m.other.empty()) out << "other " << m.other << '\n';
  for (const auto& p : m.instance_paths) out << "instance " << p << '\n';
  for (const auto& p : m.properties) {
    out << "property kind=" << kind_name(p.kind);
    if (!p.anchor.empty()) out << " anchor=" << p.anchor;
    out << " potential=" << potential_kind_name(p.potential.kind) << " lambda=" << format_number(p.potential.lambda)
        << '\n';
  }
  const auto& o = m.options;
  out << "option rounds=" << o.rounds << " exclude=" << o.exclude_sentinels << " restrict=" << o.restrict
      << " solver=" << clique_solver_name(o.solver) << " messages=" << message_mode_name(o.messages)
      << " beam=" << o.beam_width << " damping=" << format_number(o.damping) << '\n';
}

namespace {

std::pair<std::string, std::string> KeyValue(const std::string& field) {
  const auto eq = field.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + field + "'");
  return {field.substr(0, eq), field.substr(eq + 1)};
}

bool ParseBool(const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ParseError("expected a boolean, got '" + v + "'");
}

}  // namespace

Manifest read_manifest(std::istream& in) {
  LineReader reader(in);
  Manifest m;
  std::vector<std::string> f;
  while (reader.Next(f)) {
    const std::string& key = f[0];
    if (key == "labels") {
      if (f.size() < 2) reader.Fail("labels needs at least one name");
      m.labels.assign(f.begin() + 1, f.end());
    } else if (key == "other") {
      if (f.size() != 2) reader.Fail("expected 'other <name>'");
      m.other = f[1];
    } else if (key == "instance") {
      if (f.size() != 2) reader.Fail("expected 'instance <path>'");
      m.instance_paths.push_back(f[1]);
    } else if (key == "property") {
      PropertySpec spec;
      bool has_kind = false;
      reader.Wrap([&] {
        for (std::size_t i = 1; i < f.size(); ++i) {
          auto [k, v] = KeyValue(f[i]);
          if (k == "kind") {
            spec.kind = parse_property_kind(v);
            has_kind = true;
          } else if (k == "anchor") {
            spec.anchor = v;
          } else if (k == "potential") {
            spec.potential.kind = parse_potential_kind(v);
          } else if (k == "lambda") {
            spec.potential.lambda = parse_number(v);
          } else {
            throw ParseError("unknown property key '" + k + "'");
          }
        }
        return 0;
      });
      if (!has_kind) reader.Fail("property needs kind=");
      if (spec.kind != PropertyKind::kFirstNonOther && spec.anchor.empty()) reader.Fail("property needs anchor=");
      m.properties.push_back(std::move(spec));
    } else if (key == "option") {
      auto& o = m.options;
      reader.Wrap([&] {
        for (std::size_t i = 1; i < f.size(); ++i) {
          auto [k, v] = KeyValue(f[i]);
          if (k == "rounds") {
            o.rounds = ParseInt(v);
          } else if (k == "exclude") {
            o.exclude_sentinels = ParseBool(v);
          } else if (k == "restrict") {
            o.restrict = ParseBool(v);
          } else if (k == "solver") {
            o.solver = parse_clique_solver(v);
          } else if (k == "messages") {
            o.messages = parse_message_mode(v);
          } else if (k == "beam") {
            o.beam_width = ParseInt(v);
          } else if (k == "damping") {
            o.damping = parse_number(v);
          } else if (k == "threads") {
            o.threads = ParseInt(v);
          } else {
            throw ParseError("unknown option '" + k + "'");
          }
        }
        return 0;
      });
    } else {
      reader.Fail("unknown directive '" + key + "'");
    }
  }
  if (m.labels.empty()) throw ParseError("manifest has no labels line");
  return m;
}

LoadedModel load_model(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open " + manifest_path.string());
  LoadedModel out;
  try {
    out.manifest = read_manifest(in);
    out.labels = out.manifest.other.empty() ? LabelSet(out.manifest.labels)
                                            : LabelSet(out.manifest.labels, out.manifest.other);
  } catch (const ParseError& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }
  const auto dir = manifest_path.parent_path();
  for (const auto& rel : out.manifest.instance_paths) {
    const auto path = dir / rel;
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path.string());
    try {
      out.instances.push_back(read_instance(f));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
    if (out.instances.back().num_labels() != out.labels.size()) {
      throw ParseError(path.string() + ": label count differs from the manifest");
    }
  }
  return out;
}

}  // namespace symclique
