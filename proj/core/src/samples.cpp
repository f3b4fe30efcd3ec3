#include "twb/samples.hpp"

#include <string>

#include "twb/error.hpp"

namespace twb {

namespace {

Ordinal omega_times_plus(std::uint64_t k, std::uint64_t n) {
  return k == 0 ? Ordinal::nat(n) : Ordinal::omega_power(1, k).plus_nat(n);
}

}  // namespace

Fragment h_iteration_sample() {
  constexpr int kLength = 5;
  Fragment f(Shape::chain(3));
  f.set_mode(Mode::classT);
  // Sorts 0 and 1: root, a level-1 node, and the chain with its limit points.
  for (int s = 0; s < 2; ++s) {
    const std::string p = s == 0 ? "s" : "t";
    Node prev = f.add_node(p + "root", s, Ordinal());
    const Node one = f.add_node(p + "one", s, Ordinal::nat(1));
    f.add_edge(prev, one);
    prev = one;
    for (int i = 0; i < kLength; ++i) {
      const auto k = static_cast<std::uint64_t>(i + 1);
      const Node lim = f.add_node(p + "lim" + std::to_string(i), s, omega_times_plus(k, 0));
      const Node x = f.add_node(p + std::to_string(i), s, omega_times_plus(k, 1));
      f.add_edge(prev, lim);
      f.add_edge(lim, x);
      prev = x;
    }
  }
  const Node root2 = f.add_node("uroot", 2, Ordinal());
  for (int i = 0; i <= kLength; ++i) {
    const Node v = f.add_node("u" + std::to_string(i), 2, Ordinal::nat(1));
    f.add_edge(root2, v);
  }
  f.set_meet_closed(true);
  f.declare_g(f.node("sone"), 1, f.node("tone"));
  f.declare_g(f.node("tone"), 2, f.node("u" + std::to_string(kLength)));
  for (int i = 0; i < kLength; ++i) {
    const std::string n = std::to_string(i);
    f.declare_g(f.node("s" + n), 1, f.node("t" + n));
    f.declare_g(f.node("t" + n), 2, f.node("u" + n));
  }
  return complete(f, {.rank = 2, .generators = {}});
}

std::vector<Node> h_iteration_window(const Fragment& f) {
  std::vector<Node> out;
  for (int i = 0; i < 5; ++i) out.push_back(f.node("s" + std::to_string(i)));
  return out;
}

std::vector<Ordinal> hard6_levels() {
  return {Ordinal::nat(0), Ordinal::nat(1), omega_times_plus(1, 0),
          omega_times_plus(1, 1), omega_times_plus(2, 0), omega_times_plus(2, 1)};
}

PTriple hard6_sample() {
  const std::vector<std::vector<int>> keys{{1}, {3}, {5}, {1, 3}, {1, 5}, {3, 5}};
  for (unsigned mask = 0; mask < (1u << keys.size()); ++mask) {
    Coloring c;
    c.N = 6;
    c.arity = 2;
    for (std::size_t i = 0; i < keys.size(); ++i) c.table[keys[i]] = (mask >> i) & 1u;
    PTriple p = p_from_coloring(c, hard6_levels());
    if (is_hard(p, 3)) return p;
  }
  throw Error(ErrorKind::InputError, "no hard coloring of the six-node chain");
}

}  // namespace twb
