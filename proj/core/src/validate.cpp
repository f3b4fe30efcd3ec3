#include <set>

#include "twb/fragment.hpp"

namespace twb {

namespace {

class Checker {
 public:
  Checker(const Fragment& f, Mode mode) : f_(f), mode_(mode) {}

  std::vector<Violation> run() {
    order();
    tables();
    regressive();
    if (mode_ == Mode::theta) constants();
    if (mode_ == Mode::classT) class_t();
    return std::move(out_);
  }

 private:
  void add(const char* name, const std::string& detail) { out_.push_back({name, detail}); }
  std::string n(Node x) const { return "'" + f_.id(x) + "'"; }
  std::string pair(Node a, Node b) const { return "(" + f_.id(a) + "," + f_.id(b) + ")"; }

  void order() {
    for (Node y = 0; y < f_.size(); ++y) {
      if (f_.less(y, y)) add("order cycle", "through " + n(y));
      for (Node x : f_.ancestors(y)) {
        if (f_.sort(x) == kUnsorted || f_.sort(x) != f_.sort(y)) {
          add("order outside sort", pair(x, y));
          continue;
        }
        if (x != y && !(f_.level(x) < f_.level(y))) add("level not increasing", pair(x, y));
      }
      auto anc = f_.ancestors(y);
      for (std::size_t i = 0; i < anc.size(); ++i) {
        for (std::size_t j = i + 1; j < anc.size(); ++j) {
          if (!f_.comparable(anc[i], anc[j])) {
            add("down-set not a chain", "below " + n(y) + ": " + pair(anc[i], anc[j]));
          }
        }
      }
    }
  }

  bool same_sort(Node a, Node b) const { return f_.sort(a) != kUnsorted && f_.sort(a) == f_.sort(b); }

  void tables() {
    for (const auto& [key, m] : f_.meet_table()) {
      const auto [a, b] = key;
      if (!same_sort(a, b) || !same_sort(a, m) || !f_.leq(m, a) || !f_.leq(m, b)) {
        add("meet violated", pair(a, b) + " -> " + n(m) + " is not a common lower bound");
        continue;
      }
      for (Node c = 0; c < f_.size(); ++c) {
        if (f_.leq(c, a) && f_.leq(c, b) && !f_.leq(c, m)) {
          add("meet violated", pair(a, b) + " -> " + n(m) + " lies below common bound " + n(c));
          break;
        }
      }
    }
    for (const auto& [key, s] : f_.suc_table()) {
      const auto [x, y] = key;
      if (!same_sort(x, y) || !same_sort(x, s) || !f_.less(x, y) || !f_.less(x, s) || !f_.leq(s, y) ||
          f_.level(s) != f_.level(x).successor()) {
        add("suc violated", pair(x, y) + " -> " + n(s));
      }
    }
    for (const auto& [x, p] : f_.pre_table()) {
      if (!same_sort(x, p) || !f_.level(x).is_successor() || !f_.less(p, x) ||
          f_.level(p).successor() != f_.level(x)) {
        add("pre violated", n(x) + " -> " + n(p));
      }
    }
    for (const auto& [x, l] : f_.lim_table()) {
      if (!same_sort(x, l) || !f_.leq(l, x) || f_.level(l) != f_.level(x).limb_level()) {
        add("lim violated", n(x) + " -> " + n(l));
      }
    }
    const Shape& sh = f_.shape();
    for (const auto& [key, v] : f_.g_table()) {
      const auto [x, t] = key;
      const int s = f_.sort(x);
      if (s == kUnsorted || t < 0 || t >= sh.size() || !sh.is_child(s, t) || !f_.is_successor(x) ||
          f_.sort(v) != t) {
        add("G domain violated", n(x) + " -> " + n(v));
      }
    }
  }

  void regressive() {
    const auto& g = f_.g_table();
    for (auto it = g.begin(); it != g.end(); ++it) {
      const auto [x, t] = it->first;
      if (!f_.is_successor(x)) continue;
      for (auto jt = std::next(it); jt != g.end(); ++jt) {
        const auto [y, u] = jt->first;
        if (u != t || !f_.is_successor(y) || !f_.comparable(x, y) || !same_sort(x, y)) continue;
        if (f_.level(x).limb_level() != f_.level(y).limb_level()) continue;
        if (it->second != jt->second) add("regressive violated", "at " + pair(x, y));
      }
    }
  }

  void constants() {
    std::map<int, std::vector<std::pair<int, Node>>> per_sort;
    std::map<Node, std::pair<int, int>> seen;
    for (const auto& [key, c] : f_.constants()) {
      const auto [s, i] = key;
      if (f_.sort(c) != s) add("constant sort violated", "c[" + f_.shape().id(s) + "," + std::to_string(i) + "]");
      if (f_.theta_bound() > 0 && i >= f_.theta_bound())
        add("constant index out of bound", "c[" + f_.shape().id(s) + "," + std::to_string(i) + "]");
      auto [pos, fresh] = seen.emplace(c, key);
      if (!fresh) add("constants not distinct", n(c) + " names two constants");
      per_sort[s].emplace_back(i, c);
    }
    for (const auto& [s, cs] : per_sort) {
      std::optional<Node> common;
      bool differ = false;
      for (std::size_t a = 0; a < cs.size(); ++a) {
        for (std::size_t b = a + 1; b < cs.size(); ++b) {
          if (cs[a].second == cs[b].second) continue;
          auto m = f_.meet(cs[a].second, cs[b].second);
          if (!m) continue;
          if (common && *common != *m) differ = true;
          if (!common) common = m;
        }
      }
      if (differ) add("constant meets differ", "in sort " + f_.shape().id(s));
      if (common && !differ) {
        if (!f_.level(*common).is_limit()) add("constant meet not limit", n(*common));
        for (const auto& [i, c] : cs) {
          if (c != *common && f_.level(c) != f_.level(*common).successor())
            add("constant not successor of meet", n(c));
        }
      }
    }
    for (const auto& [key, c] : f_.constants()) {
      const auto [s, i] = key;
      for (int t : f_.shape().children(s)) {
        auto gv = f_.g(c, t);
        auto target = f_.constant(t, i);
        if (gv && target && *gv != *target)
          add("constant G violated", "G(" + f_.id(c) + ") into " + f_.shape().id(t));
      }
    }
  }

  void class_t() {
    for (const auto& [key, v] : f_.g_table()) {
      const Node x = key.first;
      if (f_.level(x) < f_.level(v)) add("classT level", n(x) + " -> " + n(v));
      if (f_.is_successor(x) && !f_.is_successor(v)) add("classT successor", n(x) + " -> " + n(v));
    }
  }

  const Fragment& f_;
  Mode mode_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const Fragment& f, Mode mode) { return Checker(f, mode).run(); }

}  // namespace twb
