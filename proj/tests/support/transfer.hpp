#pragma once

// Random instances for the one-point extension: the second fragment is a
// renamed copy of the first one's high-rank closure of the parameters,
// optionally with every transfinite limb pushed up by one omega.

#include <optional>

#include "support/gen.hpp"
#include "twb/closure.hpp"
#include "twb/qe.hpp"

namespace twb::testgen {

/// Copy of f restricted to keep (which must be closed), ids prefixed with "b:".
inline Fragment renamed_copy(const Fragment& f, const std::vector<Node>& keep, bool lift_limbs,
                             std::vector<Node>* image = nullptr) {
  Fragment g(f.shape());
  g.set_mode(f.mode());
  g.set_theta_bound(f.theta_bound());
  std::vector<Node> to(static_cast<std::size_t>(f.size()), -1);
  for (Node x : keep) {
    Ordinal lvl = f.level(x);
    if (lift_limbs && f.sort(x) != kUnsorted && !lvl.limb_level().is_zero()) lvl = Ordinal::omega_power(1) + lvl;
    to[x] = g.add_node("b:" + f.id(x), f.sort(x), lvl);
  }
  for (Node x : keep) {
    for (Node y : keep) {
      if (f.less(x, y)) g.add_edge(to[x], to[y]);
    }
  }
  for (const auto& [k, v] : f.g_table()) {
    if (to[k.first] >= 0 && to[v] >= 0) g.declare_g(to[k.first], k.second, to[v]);
  }
  for (const auto& [k, v] : f.constants()) {
    if (to[v] >= 0) g.declare_constant(k.first, k.second, to[v]);
  }
  g.set_meet_closed(f.meet_closed());
  if (image) *image = to;
  return g;
}

struct TransferInstance {
  Fragment fA, fB;
  std::vector<Node> a, b;
  Node c = -1;
  int m1 = 0;
};

/// A random instance over the shape with parameters agreeing at rank m2(m1,1,shape).
inline TransferInstance random_transfer_instance(Rng& rng, const Shape& shape, int m1) {
  const int M = static_cast<int>(m2(static_cast<std::uint64_t>(m1), 1, shape));
  TransferInstance t;
  t.m1 = m1;
  // Transfinite gaps make suc chains as long as the rank, so large ranks use
  // finite levels only (their completion saturates after a few rounds).
  const double jump_p = M > 16 ? 0.0 : 0.2;
  t.fA = random_shaped_fragment(rng, shape, 7, shape.empty() ? 4 : uniform(rng, 0, 2), M, jump_p, M > 16 ? 2 : 9);
  // Only generator nodes have closures of every rank up to M; completion nodes start with an '_'.
  std::vector<Node> original;
  for (Node x = 0; x < t.fA.size(); ++x) {
    if (t.fA.id(x)[0] != '_') original.push_back(x);
  }
  const int n = static_cast<int>(original.size());
  for (int i : sample(rng, n, uniform(rng, 0, 3))) t.a.push_back(original[i]);
  t.c = original[uniform(rng, 0, n - 1)];
  const auto cl = closure(t.fA, t.a, ClosureVariant::k, M);
  std::vector<Node> to;
  t.fB = renamed_copy(t.fA, cl, coin(rng), &to);
  for (Node x : t.a) t.b.push_back(to[x]);
  return t;
}

}  // namespace twb::testgen
