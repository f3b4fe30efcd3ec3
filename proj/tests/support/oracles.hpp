#pragma once

// Independent reference implementations used to cross-check the library.
// They share only the fragment's basic operations with the code under test.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "twb/fragment.hpp"

namespace twb::oracle {

/// Values of all terms of successor rank <= k over the generators and the
/// declared constants, found by a minimal-rank relaxation over term shapes.
inline std::set<Node> terms_up_to_rank(const Fragment& f, const std::vector<Node>& gens, int k) {
  std::map<Node, int> rank;
  auto offer = [&](std::optional<Node> v, int r, bool& changed) {
    if (!v || r > k) return;
    auto it = rank.find(*v);
    if (it == rank.end() || r < it->second) {
      rank[*v] = r;
      changed = true;
    }
  };
  bool changed = false;
  for (Node g : gens) offer(g, 0, changed);
  for (const auto& [key, c] : f.constants()) offer(c, 0, changed);
  changed = true;
  while (changed) {
    changed = false;
    const auto snapshot = rank;
    for (const auto& [x, rx] : snapshot) {
      if (f.sort(x) == kUnsorted) continue;
      offer(f.lim(x), rx, changed);
      if (f.is_successor(x)) {
        offer(f.pre(x), rx + 1, changed);
        for (int t : f.shape().children(f.sort(x))) offer(f.g(x, t), rx, changed);
      }
      for (const auto& [y, ry] : snapshot) {
        if (f.sort(y) != f.sort(x)) continue;
        offer(f.meet(x, y), std::max(rx, ry), changed);
        if (f.less(x, y)) offer(f.suc(x, y), std::max(rx, ry) + 1, changed);
      }
    }
  }
  std::set<Node> out;
  for (const auto& [x, r] : rank) out.insert(x);
  return out;
}

/// Counts isomorphisms (order, sorts, meet, lim, G, constants) between the
/// oracle closures sending a_i to b_i, by plain enumeration of bijections
/// with an O(n^2) final check. Stops at `limit`.
inline int brute_isomorphisms(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB,
                              const std::vector<Node>& b, int k, int limit = 2) {
  if (a.size() != b.size()) return 0;
  const auto SA = terms_up_to_rank(fA, a, k);
  const auto SB = terms_up_to_rank(fB, b, k);
  if (SA.size() != SB.size()) return 0;
  std::set<std::pair<int, int>> kA, kB;
  for (const auto& [key, c] : fA.constants()) kA.insert(key);
  for (const auto& [key, c] : fB.constants()) kB.insert(key);
  if (kA != kB) return 0;
  const std::vector<Node> xs(SA.begin(), SA.end());
  std::map<Node, Node> h;
  std::set<Node> used;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (h.count(a[i]) && h[a[i]] != b[i]) return 0;
    h[a[i]] = b[i];
  }
  for (const auto& [key, c] : fA.constants()) {
    const Node d = fB.constants().at(key);
    if (h.count(c) && h[c] != d) return 0;
    h[c] = d;
  }
  std::set<Node> images;
  for (const auto& [x, y] : h) {
    if (!SB.count(y) || !images.insert(y).second) return 0;
  }
  used = images;

  auto full_check = [&]() {
    auto img = [&](std::optional<Node> v) -> std::optional<Node> {
      if (!v) return std::nullopt;
      auto it = h.find(*v);
      return it == h.end() ? std::optional<Node>(-2) : std::optional<Node>(it->second);
    };
    for (Node x : xs) {
      const Node y = h.at(x);
      if (fA.sort(x) != fB.sort(y)) return false;
      if (fA.sort(x) == kUnsorted) continue;
      if (fA.is_successor(x) != fB.is_successor(y)) return false;
      if (img(fA.lim(x)) != fB.lim(y)) return false;
      if (fA.is_successor(x)) {
        for (int t : fA.shape().children(fA.sort(x))) {
          if (img(fA.g(x, t)) != fB.g(y, t)) return false;
        }
      }
      for (Node u : xs) {
        if (fA.sort(u) != fA.sort(x)) continue;
        const Node v = h.at(u);
        if (fA.less(x, u) != fB.less(y, v)) return false;
        if (img(fA.meet(x, u)) != fB.meet(y, v)) return false;
      }
    }
    return true;
  };

  int found = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (found >= limit) return;
    while (i < xs.size() && h.count(xs[i])) ++i;
    if (i == xs.size()) {
      if (full_check()) ++found;
      return;
    }
    const Node x = xs[i];
    for (Node y : SB) {
      if (used.count(y) || fB.sort(y) != fA.sort(x)) continue;
      bool ok = true;
      for (const auto& [u, v] : h) {
        if (fA.sort(u) == fA.sort(x) && (fA.less(u, x) != fB.less(v, y) || fA.less(x, u) != fB.less(y, v))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      h[x] = y;
      used.insert(y);
      rec(i + 1);
      h.erase(x);
      used.erase(y);
    }
  };
  rec(0);
  return found;
}

}  // namespace twb::oracle
