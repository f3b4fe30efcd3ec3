#pragma once

// Small hand-built fragments and single-edit axiom mutations.

#include <functional>
#include <string>
#include <vector>

#include "twb/fragment.hpp"

namespace twb::fixture {

/// Two sorts r -> c with two constants each, finite and transfinite levels,
/// regressive G values; completed and valid in theta and classT mode.
inline Fragment two_sort_theta() {
  ShapeSpec spec{{"r", "c"}, {{"c", "r"}}, {}};
  Fragment f(Shape::build(spec));
  f.set_mode(Mode::theta);
  f.set_theta_bound(4);
  auto L = [](const char* s) { return Ordinal::parse(s); };
  auto add = [&](const char* id, int sort, const char* lvl, const char* parent) {
    Node n = f.add_node(id, sort, L(lvl));
    if (parent) f.add_edge(f.node(parent), n);
    return n;
  };
  add("r0", 0, "0", nullptr);
  add("ra", 0, "1", "r0");
  add("rb", 0, "1", "r0");
  add("ra2", 0, "2", "ra");
  add("rb2", 0, "2", "rb");
  add("ra3", 0, "3", "ra2");
  add("rw", 0, "w", "ra3");
  add("rw1", 0, "w+1", "rw");
  add("rw2", 0, "w+2", "rw1");
  add("c0", 1, "0", nullptr);
  add("ca", 1, "1", "c0");
  add("cb", 1, "1", "c0");
  add("cw", 1, "w", "ca");
  add("cw1", 1, "w+1", "cw");
  f.declare_constant(0, 0, f.node("ra"));
  f.declare_constant(0, 1, f.node("rb"));
  f.declare_constant(1, 0, f.node("ca"));
  f.declare_constant(1, 1, f.node("cb"));
  for (const char* x : {"ra", "ra2", "ra3"}) f.declare_g(f.node(x), 1, f.node("ca"));
  for (const char* x : {"rb", "rb2"}) f.declare_g(f.node(x), 1, f.node("cb"));
  for (const char* x : {"rw1", "rw2"}) f.declare_g(f.node(x), 1, f.node("cw1"));
  f.set_meet_closed(true);
  Fragment g = complete(f);
  g.set_mode(Mode::theta);
  return g;
}

struct Mutation {
  std::string expected;  ///< violation name the edit must produce
  Mode mode;
  std::function<void(Fragment&)> apply;
};

/// One dedicated edit per axiom, each applicable to two_sort_theta().
inline std::vector<Mutation> axiom_mutations() {
  auto N = [](Fragment& f, const char* id) { return f.node(id); };
  std::vector<Mutation> m;
  m.push_back({"order cycle", Mode::base, [=](Fragment& f) { f.add_edge(N(f, "ra3"), N(f, "ra")); }});
  m.push_back({"level not increasing", Mode::base, [=](Fragment& f) { f.add_edge(N(f, "ra3"), N(f, "rb")); }});
  m.push_back({"down-set not a chain", Mode::base, [=](Fragment& f) { f.add_edge(N(f, "rb"), N(f, "ra2")); }});
  m.push_back({"order outside sort", Mode::base, [=](Fragment& f) { f.add_edge(N(f, "r0"), N(f, "cw")); }});
  m.push_back({"meet violated", Mode::base, [=](Fragment& f) { f.declare_meet(N(f, "ra"), N(f, "rb"), N(f, "ra")); }});
  m.push_back({"suc violated", Mode::base, [=](Fragment& f) { f.declare_suc(N(f, "ra"), N(f, "ra3"), N(f, "ra3")); }});
  m.push_back({"pre violated", Mode::base, [=](Fragment& f) { f.declare_pre(N(f, "ra3"), N(f, "ra")); }});
  m.push_back({"lim violated", Mode::base, [=](Fragment& f) { f.declare_lim(N(f, "rw2"), N(f, "rw1")); }});
  m.push_back({"G domain violated", Mode::base, [=](Fragment& f) { f.declare_g(N(f, "rw"), 1, N(f, "cw1")); }});
  m.push_back({"regressive violated", Mode::base, [=](Fragment& f) { f.declare_g(N(f, "ra3"), 1, N(f, "cb")); }});
  m.push_back({"constants not distinct", Mode::theta, [=](Fragment& f) { f.declare_constant(0, 1, N(f, "ra")); }});
  m.push_back({"constant sort violated", Mode::theta, [=](Fragment& f) { f.declare_constant(0, 2, N(f, "cw")); }});
  m.push_back(
      {"constant index out of bound", Mode::theta, [=](Fragment& f) { f.declare_constant(1, 9, N(f, "cw1")); }});
  m.push_back({"constant meets differ", Mode::theta, [=](Fragment& f) { f.declare_constant(0, 2, N(f, "ra2")); }});
  m.push_back({"constant meet not limit", Mode::theta, [=](Fragment& f) { f.declare_constant(0, 1, N(f, "ra2")); }});
  m.push_back(
      {"constant not successor of meet", Mode::theta, [=](Fragment& f) { f.declare_constant(0, 1, N(f, "rb2")); }});
  m.push_back({"constant G violated", Mode::theta, [=](Fragment& f) { f.declare_g(N(f, "rb"), 1, N(f, "ca")); }});
  m.push_back({"classT level", Mode::classT, [=](Fragment& f) { f.declare_g(N(f, "ra"), 1, N(f, "cw1")); }});
  m.push_back({"classT successor", Mode::classT, [=](Fragment& f) { f.declare_g(N(f, "ra"), 1, N(f, "cw")); }});
  return m;
}

inline bool has_violation(const std::vector<Violation>& v, const std::string& name) {
  for (const auto& x : v) {
    if (x.name == name) return true;
  }
  return false;
}

}  // namespace twb::fixture
