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

// Independent reference implementations used by the tests. Nothing here calls
// into the library's solvers; objectives are recomputed from first principles.

#ifndef SYMCLIQUE_TESTS_ORACLES_HPP_
#define SYMCLIQUE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Counts = std::vector<int>;
using CliqueFn = std::function<double(const Counts&)>;
using Rows = std::vector<std::vector<double>>;

inline double Potts(double lambda, const Counts& c) {
  double s = 0;
  for (int x : c) s += lambda * x * x;
  return s;
}

inline double Entropy(double lambda, const Counts& c) {
  double s = 0;
  for (int x : c) s += x > 0 ? lambda * x * std::log(static_cast<double>(x)) : 0.0;
  return s;
}

inline double MaxTable(const Rows& f, const Counts& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < c.size(); ++v) best = std::max(best, f[v][c[v]]);
  return best;
}

inline double SumTable(const Rows& f, const Counts& c) {
  double s = 0;
  for (std::size_t v = 0; v < c.size(); ++v) s += f[v][c[v]];
  return s;
}

// Linear majority with lowest-id ties; `counted` masks values that vote.
inline double Majority(const Rows& w, const Counts& c, const std::vector<bool>& excluded = {}) {
  auto ex = [&](std::size_t v) { return !excluded.empty() && excluded[v]; };
  int a = -1;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (ex(v) || c[v] == 0) continue;
    if (a < 0 || c[v] > c[a]) a = static_cast<int>(v);
  }
  if (a < 0) return 0.0;
  double s = 0;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (!ex(v)) s += w[a][v] * c[v];
  }
  return s;
}

inline Counts CountsOf(const std::vector<int>& y, int r) {
  Counts c(r, 0);
  for (int v : y) ++c[v];
  return c;
}

inline double Objective(const Rows& psi, const CliqueFn& clique, const std::vector<int>& y) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += psi[i][y[i]];
  return s + clique(CountsOf(y, static_cast<int>(psi[0].size())));
}

// Calls visit(y) on every labeling in lexicographic order.
inline void ForEachLabeling(int n, int r, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> y(n, 0);
  while (true) {
    visit(y);
    int pos = n - 1;
    while (pos >= 0 && y[pos] == r - 1) y[pos--] = 0;
    if (pos < 0) return;
    ++y[pos];
  }
}

struct Best {
  std::vector<int> y;
  double score = -std::numeric_limits<double>::infinity();
};

inline Best Enumerate(const Rows& psi, const CliqueFn& clique,
                      const std::function<bool(const std::vector<int>&)>& keep = nullptr) {
  Best best;
  const int n = static_cast<int>(psi.size());
  const int r = static_cast<int>(psi[0].size());
  ForEachLabeling(n, r, [&](const std::vector<int>& y) {
    if (keep && !keep(y)) return;
    const double s = Objective(psi, clique, y);
    if (s > best.score) best = {y, s};
  });
  return best;
}

inline Rows RandomRows(std::mt19937_64& rng, int rows, int cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Rows out(rows, std::vector<double>(cols));
  for (auto& row : out) {
    for (auto& x : row) x = u(rng);
  }
  return out;
}

// Random non-decreasing tables of width n+1.
inline Rows RandomMonotone(std::mt19937_64& rng, int r, int n, double step) {
  std::uniform_real_distribution<double> u(0.0, step);
  Rows f(r, std::vector<double>(n + 1));
  for (auto& row : f) {
    double acc = u(rng);
    for (auto& x : row) {
      x = acc;
      acc += u(rng);
    }
  }
  return f;
}

// Property oracle over string labels. Result is a value name, "<empty>" or
// "<bottom>"; sentinels are "<start>" and "<end>". Component firings follow the three-case fold literally.
struct PropertyCase {
  std::string kind;    // tokenlabel, nextlabel, firstnonother, beforetoken
  std::string anchor;  // label for nextlabel/beforetoken, token for tokenlabel
};

inline std::string PropertyOf(const PropertyCase& p, const std::vector<std::string>& tokens,
                              const std::vector<std::string>& labels, const std::string& other) {
  std::vector<std::string> fired;
  const std::size_t t = labels.size();
  for (std::size_t c = 0; c < t; ++c) {
    if (p.kind == "tokenlabel") {
      if (tokens[c] == p.anchor) fired.push_back(labels[c]);
    } else if (p.kind == "firstnonother") {
      bool first = labels[c] != other;
      for (std::size_t j = 0; j < c && first; ++j) first = labels[j] == other;
      if (first) fired.push_back(labels[c]);
    } else if (p.kind == "nextlabel") {
      const bool segment_end = labels[c] == p.anchor && (c + 1 == t || labels[c + 1] != p.anchor);
      if (!segment_end) continue;
      std::string next = "<end>";
      for (std::size_t j = c + 1; j < t; ++j) {
        if (labels[j] != other) {
          next = labels[j];
          break;
        }
      }
      fired.push_back(next);
    } else if (p.kind == "beforetoken") {
      const bool segment_start = labels[c] == p.anchor && (c == 0 || labels[c - 1] != p.anchor);
      if (segment_start) fired.push_back(c == 0 ? "<start>" : tokens[c - 1]);
    }
  }
  if (fired.empty()) return "<empty>";
  for (const auto& v : fired) {
    if (v != fired.front()) return "<bottom>";
  }
  return fired.front();
}

inline double ChainScore(const Rows& node, const std::vector<Rows>& edge, const std::vector<int>& y) {
  double s = 0;
  for (std::size_t c = 0; c < y.size(); ++c) {
    s += node[c][y[c]];
    if (c > 0) s += edge[c - 1][y[c - 1]][y[c]];
  }
  return s;
}

}  // namespace oracle

#endif  // SYMCLIQUE_TESTS_ORACLES_HPP_
