#include <algorithm>
#include <deque>

#include "twb/closure.hpp"
#include "twb/error.hpp"
#include "twb/fragment.hpp"

namespace twb {

namespace {

/// Materializes missing values into a working copy instead of failing.
class Completer : public ClosureEngine {
 public:
  explicit Completer(Fragment& g) : ClosureEngine(g), g_(g) {}

  /// Makes every sort a single tree so that meets are determined by the order.
  void join_components() {
    if (g_.meet_closed()) return;
    for (int s = 0; s < g_.shape().size(); ++s) {
      const auto members = g_.nodes_of_sort(s);
      std::vector<Node> roots;
      for (Node n : members) {
        if (g_.below(n).none()) roots.push_back(n);
      }
      if (roots.size() <= 1) continue;
      for (Node r : roots) {
        if (g_.level(r).is_zero())
          throw Error(ErrorKind::CannotComplete,
                      "meet of separate components would be forced below level-0 node '" + g_.id(r) + "'");
      }
      g_.insert_below_all(s, members, Ordinal(), g_.fresh_id("_m"));
    }
    g_.set_meet_closed(true);
  }

  /// Adds lim and G values for every node until nothing is missing.
  void close_all() {
    std::deque<Node> work;
    for (Node n = 0; n < g_.size(); ++n) work.push_back(n);
    while (!work.empty()) {
      const Node x = work.front();
      work.pop_front();
      const int s = g_.sort(x);
      if (s == kUnsorted) continue;
      const int before = g_.size();
      need_lim(x);
      if (g_.is_successor(x)) {
        for (int t : g_.shape().children(s)) need_g(x, t);
      }
      for (Node n = before; n < g_.size(); ++n) work.push_back(n);
    }
  }

 protected:
  Node need_meet(Node a, Node b) override {
    if (auto m = g_.meet(a, b)) return *m;
    throw Error(ErrorKind::CannotComplete, "no common lower bound for '" + g_.id(a) + "' and '" + g_.id(b) + "'");
  }

  Node need_lim(Node x) override {
    if (auto l = g_.lim(x)) return *l;
    return g_.insert_on_branch(x, g_.level(x).limb_level(), g_.fresh_id("_l"));
  }

  Node need_pre(Node x) override {
    if (auto p = g_.pre(x)) return *p;
    return g_.insert_on_branch(x, g_.level(x).predecessor(), g_.fresh_id("_p"));
  }

  Node need_suc(Node x, Node y) override {
    if (auto s = g_.suc(x, y)) return *s;
    return g_.insert_on_branch(y, g_.level(x).successor(), g_.fresh_id("_s"));
  }

  Node need_g(Node x, int t) override {
    if (auto v = g_.g(x, t)) return *v;
    const Node v = choose_g(x, t);
    g_.declare_g(x, t, v);
    return v;
  }

 private:
  Node choose_g(Node x, int t) {
    const int s = g_.sort(x);
    for (const auto& [key, c] : g_.constants()) {
      if (c == x && key.first == s) {
        if (auto target = g_.constant(t, key.second)) return *target;
      }
    }
    // Values already forced by regressiveness: a successor sharing the limit
    // point whose meet with x lies strictly above that limit point.
    const Ordinal limb = g_.level(x).limb_level();
    for (Node y : g_.nodes_of_sort(s)) {
      if (y == x || !g_.is_successor(y)) continue;
      auto v = g_.g(y, t);
      if (!v || g_.level(y).limb_level() != limb) continue;
      auto m = g_.meet(x, y);
      if (m && limb < g_.level(*m)) return *v;
    }
    const auto& members = g_.nodes_of_sort(t);
    Node root = -1;
    if (members.empty()) {
      root = g_.insert_leaf(t, -1, Ordinal(), g_.fresh_id("_r"));
    } else {
      for (Node n : members) {
        if (g_.below(n).none()) root = n;
      }
      if (!g_.level(root).is_zero()) {
        const std::vector<Node> all = members;
        root = g_.insert_below_all(t, all, Ordinal(), g_.fresh_id("_r"));
      }
    }
    return g_.insert_leaf(t, root, Ordinal::nat(1), g_.fresh_id("_g"));
  }

  Fragment& g_;
};

}  // namespace

Fragment complete(const Fragment& f, const CompleteOptions& opts) {
  Fragment g = f;
  Completer c(g);
  c.join_components();
  c.close_all();
  if (opts.rank > 0) {
    std::vector<Node> gens = opts.generators;
    if (gens.empty()) {
      for (Node n = 0; n < f.size(); ++n) gens.push_back(n);
    }
    c.run(gens, ClosureVariant::k, opts.rank);
    c.close_all();
  }
  return g;
}

}  // namespace twb
