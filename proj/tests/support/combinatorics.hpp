#pragma once

// Brute-force checks on colorings and lifted nodes, written from the
// definitions and shared by the unit and acceptance suites.

#include <map>
#include <set>
#include <vector>

#include "twb/partition.hpp"

namespace twb::testgen {

// Independent homogeneity test: every increasing tuple of the subsequence,
// grouped by length, gets a single color.
inline bool homogeneous_brute(const Coloring& c, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  std::map<int, std::set<Color>> seen;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> t;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) t.push_back(idx[i]);
    }
    if (static_cast<int>(t.size()) > c.arity) continue;
    seen[static_cast<int>(t.size())].insert(c(t));
  }
  for (const auto& [len, s] : seen) {
    if (s.size() > 1) return false;
  }
  return true;
}

/// Next combination of `k` out of `n` in lexicographic order.
inline bool next_combination(std::vector<int>& v, int n) {
  const int k = static_cast<int>(v.size());
  for (int i = k - 1; i >= 0; --i) {
    if (v[i] < n - k + i) {
      ++v[i];
      for (int j = i + 1; j < k; ++j) v[j] = v[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Tightness re-checked from the definition, independently of the clause checker.
inline bool tight(const PTriple& p, const QNode& a) {
  if (a.length() == 0) return true;
  const Fragment& f = p.tree;
  const DType& g = a.gamma.at(0);
  for (int b = 0; b < a.length(); ++b) {
    for (Node t = 0; t < f.size(); ++t) {
      if (!is_suc_lim(f, t) || !f.less(t, a.eta[b])) continue;
      bool above = true;
      for (int bp = 0; bp < b; ++bp) above = above && f.less(a.eta[bp], t);
      if (!above || p.d.at({t}) != g.eq.at({})) continue;
      if (b == 0) return false;
      bool sat = true;
      for (const auto& [tuple, col] : g.eq) {
        auto full = tuple;
        full.push_back(t);
        sat = sat && p.d.at(full) == col;
      }
      if (sat) return false;
    }
  }
  return true;
}

}  // namespace twb::testgen
