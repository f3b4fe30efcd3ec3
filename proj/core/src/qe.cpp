#include "twb/qe.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "twb/closure.hpp"
#include "twb/error.hpp"

namespace twb {

std::uint64_t m2(std::uint64_t m1, std::uint64_t k, const Shape& shape, std::uint64_t cap) {
  auto check = [&](std::uint64_t v) {
    if (v > cap) throw Error(ErrorKind::BudgetExceeded, "m2 exceeds cap " + std::to_string(cap));
    return v;
  };
  check(m1);
  if (shape.empty() || k == 0) return m1;
  if (k > 1) return m2(m2(m1, k - 1, shape, cap), 1, shape, cap);
  std::uint64_t best = 0;
  for (const Shape& comp : shape.decompose().second) {
    const std::uint64_t v = m2(m1, kNewElementBound, comp, cap);
    best = std::max(best, check(2 * v));
  }
  return check(best + 2 * m1 + 1);
}

namespace {

Ordinal next_limit(const Ordinal& a) { return a.limb_level() + Ordinal::omega_power(1); }

/// Copies the part of a closure in fA that has no image yet into fB, placing
/// each new node by its position relative to already mapped nodes.
class Placer {
 public:
  Placer(const Fragment& fA, Fragment& g, const Witness& f) : fA_(fA), g_(g) {
    for (const auto& [x, y] : f) {
      h_[x] = y;
      old_.insert(x);
      used_.insert(y);
    }
  }

  void place(const std::vector<Node>& X) {
    std::vector<Node> fresh;
    for (Node x : X) {
      if (!h_.count(x)) fresh.push_back(x);
    }
    std::sort(fresh.begin(), fresh.end(), [&](Node a, Node b) {
      if (fA_.sort(a) != fA_.sort(b)) return fA_.sort(a) < fA_.sort(b);
      if (fA_.level(a) != fA_.level(b)) return fA_.level(a) < fA_.level(b);
      return fA_.id(a) < fA_.id(b);
    });
    for (Node e : fresh) place_one(e, X);
    for (Node e : fresh) copy_g(e);
  }

  Node image(Node x) const { return h_.at(x); }
  const std::vector<Node>& created() const { return created_; }

 private:
  [[noreturn]] void conflict(const std::string& what) const { throw Error(ErrorKind::CannotComplete, what); }

  /// Mapped (or to-be-mapped) elements comparable with e in its sort, sorted by level.
  std::vector<Node> known_chain(Node e, const std::vector<Node>& X) const {
    std::vector<Node> c;
    auto consider = [&](Node u) {
      if (u != e && fA_.sort(u) == fA_.sort(e) && fA_.comparable(u, e)) c.push_back(u);
    };
    for (Node u : old_) consider(u);
    for (Node u : X) {
      if (!old_.count(u)) consider(u);
    }
    c.push_back(e);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::sort(c.begin(), c.end(), [&](Node a, Node b) { return fA_.level(a) < fA_.level(b); });
    return c;
  }

  Ordinal choose_level(Node e, const std::vector<Node>& chain, std::size_t i) {
    std::optional<Node> lo;
    if (i > 0) lo = chain[i - 1];
    std::optional<Node> hi_old;
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      if (old_.count(chain[j])) {
        hi_old = chain[j];
        break;
      }
    }
    const Ordinal& le = fA_.level(e);
    if (le.is_limit()) {
      Ordinal L = lo ? next_limit(g_.level(h_.at(*lo))) : Ordinal();
      if (hi_old && !(L < g_.level(h_.at(*hi_old)).limb_level()))
        conflict("no limit level available below '" + g_.id(h_.at(*hi_old)) + "'");
      return L;
    }
    // Successor: same-limb neighbours. Gaps of one are kept, longer gaps shrink to two.
    const Node lim = *fA_.lim(e);
    auto same_limb = [&](Node u) { return fA_.lim(u) == std::optional<Node>(lim); };
    auto offset = [&](Node u) { return fA_.level(u).mod_omega(); };
    std::size_t j = i;
    while (j + 1 < chain.size() && same_limb(chain[j + 1]) && offset(chain[j + 1]) == offset(chain[j]) + 1 &&
           !old_.count(chain[j]))
      ++j;
    if (j > i && old_.count(chain[j])) {
      const Ordinal& top = g_.level(h_.at(chain[j]));
      const std::uint64_t down = offset(chain[j]) - offset(e);
      if (top.mod_omega() <= down) conflict("no room below '" + g_.id(h_.at(chain[j])) + "'");
      return top.limb_level().plus_nat(top.mod_omega() - down);
    }
    if (!lo) conflict("successor without a lower neighbour");
    const Ordinal& base = g_.level(h_.at(*lo));
    const std::uint64_t step = offset(e) - offset(*lo) == 1 ? 1 : 2;
    Ordinal L = base.plus_nat(step);
    if (!same_limb(*lo)) L = g_.level(h_.at(lim)).plus_nat(offset(e) == 1 ? 1 : 2);
    // Room for the same-limb elements above e up to the next mapped one.
    std::uint64_t need = 0;
    for (std::size_t q = i; q + 1 < chain.size() && same_limb(chain[q + 1]); ++q) {
      need += offset(chain[q + 1]) - offset(chain[q]) == 1 ? 1 : 2;
      if (old_.count(chain[q + 1])) {
        const Ordinal& top = g_.level(h_.at(chain[q + 1]));
        if (top.limb_level() != L.limb_level() || L.mod_omega() + need > top.mod_omega())
          conflict("not enough room below '" + g_.id(h_.at(chain[q + 1])) + "'");
        break;
      }
    }
    return L;
  }

  void place_one(Node e, const std::vector<Node>& X) {
    const int s = fA_.sort(e);
    if (s == kUnsorted) {
      record(e, g_.add_node(g_.fresh_id("_q"), kUnsorted), true);
      return;
    }
    const auto chain = known_chain(e, X);
    const std::size_t i = static_cast<std::size_t>(std::find(chain.begin(), chain.end(), e) - chain.begin());
    const Ordinal L = choose_level(e, chain, i);
    std::optional<Node> hi_old;
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      if (old_.count(chain[j]) && fA_.less(e, chain[j])) {
        hi_old = chain[j];
        break;
      }
    }
    if (hi_old) {
      const Node top = h_.at(*hi_old);
      if (auto there = g_.ancestor_at(top, L)) {
        if (used_.count(*there)) conflict("level " + L.str() + " below '" + g_.id(top) + "' is taken");
        record(e, *there, false);
      } else {
        record(e, g_.insert_on_branch(top, L, g_.fresh_id("_q")), true);
      }
      return;
    }
    std::optional<Node> lo;
    for (std::size_t j = i; j-- > 0;) {
      if (fA_.less(chain[j], e)) {
        lo = chain[j];
        break;
      }
    }
    if (lo) {
      record(e, g_.insert_leaf(s, h_.at(*lo), L, g_.fresh_id("_q")), true);
      return;
    }
    const auto& members = g_.nodes_of_sort(s);
    if (members.empty()) {
      record(e, g_.insert_leaf(s, -1, L, g_.fresh_id("_q")), true);
      return;
    }
    for (Node r : members) {
      if (g_.below(r).none() && g_.level(r) == L) {
        if (used_.count(r)) conflict("root of sort '" + g_.shape().id(s) + "' is taken");
        record(e, r, false);
        return;
      }
    }
    record(e, g_.insert_below_all(s, members, L, g_.fresh_id("_q")), true);
  }

  void copy_g(Node e) {
    if (!fA_.is_successor(e)) return;
    for (int t : fA_.shape().children(fA_.sort(e))) {
      auto v = fA_.g(e, t);
      if (!v) throw Error(ErrorKind::NotClosed, "G of '" + fA_.id(e) + "' missing");
      auto it = h_.find(*v);
      if (it == h_.end()) conflict("G value of '" + fA_.id(e) + "' was not copied");
      const Node e2 = h_.at(e);
      if (auto have = g_.g(e2, t); have && *have != it->second)
        conflict("'" + g_.id(e2) + "' already has another G value");
      g_.declare_g(e2, t, it->second);
    }
  }

  void record(Node e, Node img, bool created) {
    h_[e] = img;
    used_.insert(img);
    if (created) created_.push_back(img);
  }

  const Fragment& fA_;
  Fragment& g_;
  std::map<Node, Node> h_;
  std::set<Node> old_;
  std::set<Node> used_;
  std::vector<Node> created_;
};

std::string route_for(const Fragment& fA, const std::vector<Node>& a, Node c) {
  const int s = fA.sort(c);
  if (s == kUnsorted) return "unsorted point";
  const Shape& sh = fA.shape();
  if (s != sh.root()) {
    int top = s;
    while (sh.parent(top) != sh.root()) top = sh.parent(top);
    return "upper component at '" + sh.id(top) + "'";
  }
  std::vector<Node> A0;
  for (Node x : closure_list(fA, a, ClosureVariant::zero)) {
    if (fA.sort(x) == s) A0.push_back(x);
  }
  if (std::find(A0.begin(), A0.end(), c) != A0.end()) return "root sort: in the parameter closure";
  std::optional<Node> y, x;
  for (Node u : A0) {
    if (fA.less(c, u) && (!y || fA.less(u, *y))) y = u;
    if (fA.less(u, c) && (!x || fA.less(*x, u))) x = u;
  }
  if (!y) return "root sort: new branch through its meet point";
  if (!x) return "root sort: inside a branch, nothing below";
  if (fA.lim(*x) != fA.lim(*y)) return "root sort: inside a branch, limbs differ";
  return "root sort: inside a branch, same limb";
}

}  // namespace

Extension extend_one_point(const Fragment& fA, const std::vector<Node>& a, Node c, const Fragment& fB,
                           const std::vector<Node>& b, int m1) {
  Extension out{fB, -1, route_for(fA, a, c), {}, m2(static_cast<std::uint64_t>(m1), 1, fA.shape())};
  const int M = static_cast<int>(out.rank_used);
  const auto f = equiv_k(fA, a, fB, b, M);
  if (!f) throw Error(ErrorKind::RankTooLow, "parameters do not agree at rank " + std::to_string(M));

  std::vector<Node> ca{c};
  ca.insert(ca.end(), a.begin(), a.end());
  Placer placer(fA, out.fragment, *f);
  if (fA.sort(c) == fA.shape().root() && out.route == "root sort: new branch through its meet point") {
    // The meet point goes in first; it lies in a branch of the parameters.
    std::optional<Node> meet_point;
    for (Node u : closure_list(fA, a, ClosureVariant::zero)) {
      if (fA.sort(u) != fA.sort(c)) continue;
      auto m = fA.meet(c, u);
      if (m && (!meet_point || fA.less(*meet_point, *m))) meet_point = m;
    }
    if (meet_point) {
      std::vector<Node> pa{*meet_point};
      pa.insert(pa.end(), a.begin(), a.end());
      placer.place(closure_list(fA, pa, ClosureVariant::k, m1));
    }
  }
  placer.place(closure_list(fA, ca, ClosureVariant::k, m1));
  out.d = placer.image(c);
  out.new_nodes = placer.created();
  if (out.new_nodes.empty() && fA.sort(c) != kUnsorted) out.route += " (image under the witness)";

  std::vector<Node> db{out.d};
  db.insert(db.end(), b.begin(), b.end());
  if (!equiv_k(fA, ca, out.fragment, db, m1))
    throw Error(ErrorKind::CannotComplete, "placement does not reproduce the rank-" + std::to_string(m1) + " type");
  return out;
}

bool QECandidate::holds(const Fragment& f, const std::vector<Node>& x) const {
  return positive.count(tp_code(f, x, {}, rank)) > 0;
}

namespace {

void variable_sorts(const Term& t, std::map<int, int>& out) {
  if (t.op == Term::Op::var) out[t.index] = t.sort;
  for (const auto& a : t.args) variable_sorts(a, out);
}

void variable_sorts(const Formula& phi, std::map<int, int>& out) {
  switch (phi.kind) {
    case Formula::Kind::truth: return;
    case Formula::Kind::eq:
    case Formula::Kind::less:
      variable_sorts(phi.lhs, out);
      variable_sorts(phi.rhs, out);
      return;
    case Formula::Kind::in_sort: variable_sorts(phi.lhs, out); return;
    default:
      for (const auto& a : phi.args) variable_sorts(a, out);
  }
}

/// The fragment plus one node: above a node, or inserted on a branch just above a node.
std::vector<Fragment> one_point_extensions(const Fragment& F, int sort) {
  std::vector<Fragment> out;
  if (sort == kUnsorted) {
    Fragment g = F;
    g.add_node(g.fresh_id("_y"), kUnsorted);
    out.push_back(std::move(g));
    return out;
  }
  const auto& members = F.nodes_of_sort(sort);
  if (members.empty()) {
    Fragment g = F;
    g.insert_leaf(sort, -1, Ordinal(), g.fresh_id("_y"));
    out.push_back(std::move(g));
    return out;
  }
  for (Node u : members) {
    const Ordinal up = F.level(u).successor();
    Fragment g = F;
    g.insert_leaf(sort, u, up, g.fresh_id("_y"));
    out.push_back(std::move(g));
    for (Node v : members) {
      if (F.less(u, v) && F.level(v) > up && !F.ancestor_at(v, up)) {
        Fragment h = F;
        h.insert_on_branch(v, up, h.fresh_id("_y"));
        out.push_back(std::move(h));
      }
    }
  }
  return out;
}

}  // namespace

QECandidate qe_candidate(const Formula& phi, int witness_sort, const std::vector<Fragment>& corpus, int m,
                         std::uint64_t budget) {
  if (corpus.empty()) throw Error(ErrorKind::InputError, "empty corpus");
  const std::uint64_t need = m2(static_cast<std::uint64_t>(r_suc(phi)), 1, corpus.front().shape());
  if (static_cast<std::uint64_t>(m) < need)
    throw Error(ErrorKind::RankTooLow, "configurations need rank " + std::to_string(need));
  std::map<int, int> sorts;
  variable_sorts(phi, sorts);
  sorts[0] = witness_sort;
  QECandidate out;
  out.rank = m;
  out.arity = std::max(0, variable_count(phi) - 1);
  std::uint64_t work = 0;
  for (const Fragment& F : corpus) {
    const auto exts = one_point_extensions(F, witness_sort);
    std::vector<Node> x(static_cast<std::size_t>(out.arity));
    std::function<void(int)> rec = [&](int i) {
      if (i == out.arity) {
        if (++work > budget) throw Error(ErrorKind::BudgetExceeded, "qe candidate tuple budget");
        std::vector<Node> assign{0};
        assign.insert(assign.end(), x.begin(), x.end());
        bool found = false;
        for (Node y = 0; y < F.size() && !found; ++y) {
          if (F.sort(y) != witness_sort) continue;
          assign[0] = y;
          found = holds(F, phi, assign);
        }
        for (std::size_t e = 0; e < exts.size() && !found; ++e) {
          assign[0] = exts[e].size() - 1;
          found = holds(exts[e], phi, assign);
        }
        const TypeCode code = tp_code(F, x, {}, m);
        (found ? out.positive : out.negative).insert(code);
        if (out.positive.count(code) && out.negative.count(code)) out.conflicting.insert(code);
        return;
      }
      const int s = sorts.count(i + 1) ? sorts.at(i + 1) : kUnsorted;
      for (Node n = 0; n < F.size(); ++n) {
        if (F.sort(n) != s) continue;
        x[i] = n;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

}  // namespace twb
