#include "twb/partition.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "twb/closure.hpp"
#include "twb/error.hpp"
#include "twb/term.hpp"
#include "twb/types.hpp"

namespace twb {

Color Coloring::operator()(const std::vector<int>& tuple) const {
  auto it = table.find(tuple);
  return it == table.end() ? default_color : it->second;
}

namespace {

/// Calls fn on every increasing tuple of `len` elements of `pool` that ends with
/// `last` (which must come after every element of pool).
void tuples_ending_with(const std::vector<int>& pool, int last, int len,
                        const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(cur.size()) == len - 1) {
      cur.push_back(last);
      fn(cur);
      cur.pop_back();
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

void spend(std::uint64_t& steps, std::uint64_t budget, const char* what) {
  if (++steps > budget) throw Error(ErrorKind::BudgetExceeded, std::string(what) + " exceeded its step budget");
}

}  // namespace

std::optional<Homogeneous> find_homogeneous(const Coloring& c, int delta, std::uint64_t budget) {
  if (c.arity < 2) throw Error(ErrorKind::InputError, "coloring arity must be at least 2");
  if (delta < 1 || delta > c.N) throw Error(ErrorKind::InputError, "target length must lie in 1..N");
  const int lengths = std::min(c.arity, delta);
  std::vector<int> cur;
  std::vector<std::optional<Color>> ref(static_cast<std::size_t>(lengths) + 1);
  std::uint64_t steps = 0;

  std::function<bool(int)> extend = [&](int from) -> bool {
    if (static_cast<int>(cur.size()) == delta) return true;
    const int need = delta - static_cast<int>(cur.size());
    for (int i = from; i + need <= c.N; ++i) {
      spend(steps, budget, "homogeneous search");
      std::vector<int> fixed_here;
      bool ok = true;
      for (int len = 1; ok && len <= std::min(lengths, static_cast<int>(cur.size()) + 1); ++len) {
        tuples_ending_with(cur, i, len, [&](const std::vector<int>& t) {
          if (!ok) return;
          const Color col = c(t);
          if (!ref[len]) {
            ref[len] = col;
            fixed_here.push_back(len);
          } else if (*ref[len] != col) {
            ok = false;
          }
        });
      }
      if (ok) {
        cur.push_back(i);
        if (extend(i + 1)) return true;
        cur.pop_back();
      }
      for (int len : fixed_here) ref[len].reset();
    }
    return false;
  };

  if (!extend(0)) return std::nullopt;
  Homogeneous h;
  h.indices = cur;
  for (int len = 1; len <= lengths; ++len) h.colors.push_back(*ref[len]);
  return h;
}

// ---------------------------------------------------------------- literals

namespace {

struct Named {
  int rank;
  Term term;
  std::string text;
};

bool better(const Named& a, const Named& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.text.size() != b.text.size()) return a.text.size() < b.text.size();
  return a.text < b.text;
}

/// Names every node of the rank-k closure of the tuple by a term of least successor rank.
std::map<Node, Named> name_closure(const Fragment& f, const std::vector<Node>& a, int k) {
  const auto list = closure_list(f, type_seeds(f, a, {}), ClosureVariant::k, k);
  const std::set<Node> C(list.begin(), list.end());
  const Shape& sh = f.shape();
  std::map<Node, Named> names;
  auto offer = [&](Node n, int rank, Term t) {
    if (!C.count(n) || rank > k) return false;
    Named cand{rank, t, t.str(&sh)};
    auto it = names.find(n);
    if (it != names.end() && !better(cand, it->second)) return false;
    names[n] = std::move(cand);
    return true;
  };
  for (std::size_t i = 0; i < a.size(); ++i) offer(a[i], 0, Term::var(static_cast<int>(i), f.sort(a[i])));
  for (const auto& [key, c] : f.constants()) offer(c, 0, Term::constant(key.first, key.second));

  for (bool changed = true; changed;) {
    changed = false;
    const auto snapshot = names;
    for (const auto& [u, nu] : snapshot) {
      const int s = f.sort(u);
      if (s == kUnsorted) continue;
      if (auto l = f.lim(u)) changed |= offer(*l, nu.rank, Term::lim(nu.term));
      if (f.is_successor(u)) {
        if (auto p = f.pre(u)) changed |= offer(*p, nu.rank + 1, Term::pre(nu.term));
        for (int t : sh.children(s)) {
          if (auto g = f.g(u, t)) changed |= offer(*g, nu.rank, Term::g(nu.term, t));
        }
      }
      for (const auto& [v, nv] : snapshot) {
        if (f.sort(v) != s) continue;
        const int r = std::max(nu.rank, nv.rank);
        if (auto m = f.meet(u, v)) changed |= offer(*m, r, Term::meet(nu.term, nv.term));
        if (f.less(u, v)) {
          if (auto sc = f.suc(u, v)) changed |= offer(*sc, r + 1, Term::suc(nu.term, nv.term));
        }
      }
    }
  }
  return names;
}

/// Atomic facts about the named closure: equality, order, sort membership and
/// the graph of every operation that stays inside the closure.
std::vector<Formula> diagram_atoms(const Fragment& f, const std::map<Node, Named>& names) {
  std::vector<Formula> atoms;
  const Shape& sh = f.shape();
  auto name_of = [&](Node n) -> const Named* {
    auto it = names.find(n);
    return it == names.end() ? nullptr : &it->second;
  };
  for (const auto& [u, nu] : names) {
    const int s = f.sort(u);
    for (int t = 0; t < sh.size(); ++t) atoms.push_back(Formula::in_sort(nu.term, t));
    if (s == kUnsorted) continue;
    if (auto l = f.lim(u); l && name_of(*l)) atoms.push_back(Formula::eq(Term::lim(nu.term), name_of(*l)->term));
    if (f.is_successor(u)) {
      if (auto p = f.pre(u); p && name_of(*p)) atoms.push_back(Formula::eq(Term::pre(nu.term), name_of(*p)->term));
      for (int t : sh.children(s)) {
        if (auto g = f.g(u, t); g && name_of(*g)) atoms.push_back(Formula::eq(Term::g(nu.term, t), name_of(*g)->term));
      }
    }
    for (const auto& [v, nv] : names) {
      if (f.sort(v) != s) continue;
      atoms.push_back(Formula::eq(nu.term, nv.term));
      atoms.push_back(Formula::less(nu.term, nv.term));
      if (auto m = f.meet(u, v); m && name_of(*m))
        atoms.push_back(Formula::eq(Term::meet(nu.term, nv.term), name_of(*m)->term));
      if (f.less(u, v)) {
        if (auto sc = f.suc(u, v); sc && name_of(*sc))
          atoms.push_back(Formula::eq(Term::suc(nu.term, nv.term), name_of(*sc)->term));
      }
    }
  }
  return atoms;
}

}  // namespace

std::optional<std::string> separating_literal(const Fragment& f, const std::vector<Node>& a,
                                              const std::vector<Node>& b, int k) {
  if (a.size() != b.size()) throw Error(ErrorKind::InputError, "separating literal needs tuples of equal length");
  if (tp_code(f, a, {}, k) == tp_code(f, b, {}, k)) return std::nullopt;
  const Shape& sh = f.shape();
  std::optional<std::string> best;
  auto consider = [&](std::string s) {
    if (!best || s < *best) best = std::move(s);
  };
  // Variables of different sorts cannot be evaluated on the other tuple; the sort atom separates them.
  bool sorts_differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (f.sort(a[i]) == f.sort(b[i])) continue;
    sorts_differ = true;
    const Term x = Term::var(static_cast<int>(i), f.sort(a[i]));
    if (f.sort(a[i]) != kUnsorted) consider(Formula::in_sort(x, f.sort(a[i])).str(&sh));
    else if (f.sort(b[i]) != kUnsorted) consider(Formula::negation(Formula::in_sort(x, f.sort(b[i]))).str(&sh));
  }
  if (sorts_differ) {
    if (!best) throw std::logic_error("tuples of different sorts without a separating sort literal");
    return best;
  }
  for (const Formula& atom : diagram_atoms(f, name_closure(f, a, k))) {
    const bool on_a = holds(f, atom, a);
    const Formula lit = on_a ? atom : Formula::negation(atom);
    if (holds(f, lit, b)) continue;
    consider(lit.str(&sh));
  }
  if (!best) throw std::logic_error("types differ but no literal of the named closure separates them");
  return best;
}

Coloring coloring_from_sequence(const Fragment& f, const std::vector<Node>& seq, int k, int half_arity) {
  if (half_arity < 1) throw Error(ErrorKind::InputError, "half arity must be positive");
  Coloring c;
  c.N = static_cast<int>(seq.size());
  c.arity = 2 * half_arity;
  std::map<std::vector<int>, std::optional<std::string>> lits;
  std::set<std::string> basis;
  for (int m = 1; m <= half_arity; ++m) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
      if (static_cast<int>(cur.size()) == 2 * m) {
        std::vector<Node> lo, hi;
        for (int i = 0; i < m; ++i) lo.push_back(seq[cur[i]]);
        for (int i = m; i < 2 * m; ++i) hi.push_back(seq[cur[i]]);
        auto lit = separating_literal(f, lo, hi, k);
        if (lit) basis.insert(*lit);
        lits[cur] = std::move(lit);
        return;
      }
      for (int i = from; i < c.N; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  const std::vector<std::string> order(basis.begin(), basis.end());
  for (const auto& [t, lit] : lits) {
    if (!lit) continue;
    c.table[t] = 1 + static_cast<Color>(std::lower_bound(order.begin(), order.end(), *lit) - order.begin());
  }
  return c;
}

std::uint64_t pair(std::uint64_t a, std::uint64_t b) { return (a + b) * (a + b + 1) / 2 + b; }

std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t x) {
  std::uint64_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= x) ++w;
  const std::uint64_t b = x - w * (w + 1) / 2;
  return {w - b, b};
}

// ---------------------------------------------------------------- triples

bool is_suc_lim(const Fragment& f, Node x) { return f.sort(x) != kUnsorted && f.level(x).mod_omega() == 1; }

std::vector<Node> suc_lim_nodes(const Fragment& f) {
  std::vector<Node> out;
  for (Node x = 0; x < f.size(); ++x) {
    if (is_suc_lim(f, x)) out.push_back(x);
  }
  std::sort(out.begin(), out.end(), [&](Node a, Node b) {
    if (f.level(a) != f.level(b)) return f.level(a) < f.level(b);
    return f.id(a) < f.id(b);
  });
  return out;
}

bool neighbours(const Fragment& f, Node a, Node b) {
  return f.sort(a) == f.sort(b) && f.level(a) == f.level(b) && f.below(a) == f.below(b);
}

namespace {

bool increasing(const Fragment& f, const std::vector<Node>& t) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!f.less(t[i - 1], t[i])) return false;
  }
  return true;
}

std::string tuple_str(const Fragment& f, const std::vector<Node>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + f.id(t[i]);
  return s + ")";
}

/// Every increasing chain from `pool` (sorted by level) with length in [lo, hi].
void for_each_chain(const Fragment& f, const std::vector<Node>& pool, int lo, int hi,
                    const std::function<void(const std::vector<Node>&)>& fn) {
  std::vector<Node> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(cur.size()) >= lo) fn(cur);
    if (static_cast<int>(cur.size()) == hi) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      if (!cur.empty() && !f.less(cur.back(), pool[i])) continue;
      cur.push_back(pool[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

std::optional<Color> d_of(const PTriple& p, const std::vector<Node>& t) {
  auto it = p.d.find(t);
  if (it == p.d.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::vector<Violation> validate_ptriple(const PTriple& p) {
  const Fragment& f = p.tree;
  std::vector<Violation> out = validate(f, Mode::base);
  if (f.shape().size() != 1) out.push_back({"not single-sort", "the tree has " + std::to_string(f.shape().size()) + " sorts"});
  for (Node x = 0; x < f.size(); ++x) {
    if (f.sort(x) == kUnsorted) out.push_back({"not single-sort", "'" + f.id(x) + "' is unsorted"});
  }
  if (static_cast<int>(p.e_class.size()) != f.size()) {
    out.push_back({"E size mismatch", std::to_string(p.e_class.size()) + " labels for " + std::to_string(f.size()) + " nodes"});
    return out;
  }
  for (Node a = 0; a < f.size(); ++a) {
    for (Node b = a + 1; b < f.size(); ++b) {
      const bool same = p.e_class[a] == p.e_class[b];
      const bool nb = neighbours(f, a, b);
      const std::string w = "('" + f.id(a) + "','" + f.id(b) + "')";
      if (same && !nb) out.push_back({"E not a refinement of neighbours", w});
      if (nb && !same && !is_suc_lim(f, a)) out.push_back({"E differs from neighbours off Suc_lim", w});
      if (same && f.level(a).is_limit()) out.push_back({"E not equality on limit nodes", w});
    }
  }
  for (const auto& [key, col] : p.d) {
    if (static_cast<int>(key.size()) > p.arity || key.empty()) out.push_back({"d key length out of range", tuple_str(f, key)});
    if (!increasing(f, key)) out.push_back({"d key not increasing", tuple_str(f, key)});
    for (Node x : key) {
      if (!is_suc_lim(f, x)) {
        out.push_back({"d key outside Suc_lim", tuple_str(f, key)});
        break;
      }
    }
  }
  for_each_chain(f, suc_lim_nodes(f), 1, p.arity, [&](const std::vector<Node>& t) {
    if (!p.d.count(t)) out.push_back({"d missing value", tuple_str(f, t)});
  });
  return out;
}

std::map<Node, int> e_classes_per_neighbourhood(const PTriple& p) {
  const Fragment& f = p.tree;
  std::map<Node, std::set<int>> classes;
  for (Node x = 0; x < f.size(); ++x) {
    Node rep = x;
    for (Node y = 0; y < x; ++y) {
      if (neighbours(f, x, y)) {
        rep = y;
        break;
      }
    }
    classes[rep].insert(p.e_class.at(x));
  }
  std::map<Node, int> out;
  for (const auto& [rep, s] : classes) out[rep] = static_cast<int>(s.size());
  return out;
}

std::optional<std::vector<Node>> find_clause5_sequence(const PTriple& p, int delta, std::uint64_t budget) {
  if (delta < 1) throw Error(ErrorKind::InputError, "sequence length must be positive");
  const Fragment& f = p.tree;
  const auto pool = suc_lim_nodes(f);
  const int lengths = std::min(p.arity, delta);
  std::vector<Node> cur;
  std::vector<std::optional<Color>> ref(static_cast<std::size_t>(lengths) + 1);
  std::uint64_t steps = 0;

  std::function<bool(std::size_t)> extend = [&](std::size_t from) -> bool {
    if (static_cast<int>(cur.size()) == delta) return true;
    for (std::size_t i = from; i < pool.size(); ++i) {
      const Node x = pool[i];
      if (!cur.empty() && !f.less(cur.back(), x)) continue;
      spend(steps, budget, "hardness search");
      std::vector<int> positions(cur.size());
      for (std::size_t j = 0; j < cur.size(); ++j) positions[j] = static_cast<int>(j);
      std::vector<int> fixed_here;
      bool ok = true;
      for (int len = 1; ok && len <= std::min(lengths, static_cast<int>(cur.size()) + 1); ++len) {
        tuples_ending_with(positions, -1, len, [&](const std::vector<int>& idx) {
          if (!ok) return;
          std::vector<Node> t;
          for (int j : idx) t.push_back(j < 0 ? x : cur[j]);
          auto col = d_of(p, t);
          if (!col) {
            ok = false;
          } else if (!ref[len]) {
            ref[len] = *col;
            fixed_here.push_back(len);
          } else if (*ref[len] != *col) {
            ok = false;
          }
        });
      }
      if (ok) {
        cur.push_back(x);
        if (extend(i + 1)) return true;
        cur.pop_back();
      }
      for (int len : fixed_here) ref[len].reset();
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return cur;
}

PTriple p_from_coloring(const Coloring& c, const std::vector<Ordinal>& levels) {
  if (static_cast<int>(levels.size()) != c.N)
    throw Error(ErrorKind::InputError, "need one level per coloring position");
  std::vector<TreeNodeSpec> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < c.N; ++i) {
    if (i > 0 && !(levels[i - 1] < levels[i])) throw Error(ErrorKind::InputError, "levels must increase");
    nodes.push_back({"p" + std::to_string(i), levels[i]});
    if (i > 0) edges.push_back({"p" + std::to_string(i - 1), "p" + std::to_string(i)});
  }
  PTriple p;
  p.tree = from_standard_tree(nodes, edges);
  p.arity = c.arity;
  p.source = c;
  p.source_levels = levels;
  for (Node x = 0; x < p.tree.size(); ++x) p.e_class.push_back(x);
  for_each_chain(p.tree, suc_lim_nodes(p.tree), 1, c.arity, [&](const std::vector<Node>& t) {
    std::vector<int> pos;
    for (Node x : t) pos.push_back(std::stoi(p.tree.id(x).substr(1)));
    p.d[t] = c(pos);
  });
  return p;
}

// ---------------------------------------------------------------- d-types

std::vector<std::vector<Node>> dtype_tuples(const PTriple& p, const std::vector<Node>& A) {
  const Fragment& f = p.tree;
  std::vector<Node> sorted = A;
  std::sort(sorted.begin(), sorted.end(), [&](Node a, Node b) { return f.level(a) < f.level(b); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!f.less(sorted[i - 1], sorted[i])) throw Error(ErrorKind::InputError, "d-type parameters must form a chain");
  }
  std::vector<std::vector<Node>> out;
  for_each_chain(f, sorted, 0, p.arity - 1, [&](const std::vector<Node>& t) { out.push_back(t); });
  return out;
}

DType dtp(const PTriple& p, Node t, const std::vector<Node>& A) {
  if (!is_suc_lim(p.tree, t)) throw Error(ErrorKind::InputError, "'" + p.tree.id(t) + "' is not in Suc_lim");
  DType q;
  for (const auto& tuple : dtype_tuples(p, A)) {
    if (!tuple.empty() && !p.tree.less(tuple.back(), t)) continue;
    auto full = tuple;
    full.push_back(t);
    if (auto col = d_of(p, full)) q.eq[tuple] = *col;
  }
  return q;
}

bool satisfies(const PTriple& p, Node t, const DType& q) {
  for (const auto& [tuple, col] : q.eq) {
    auto full = tuple;
    full.push_back(t);
    auto got = d_of(p, full);
    if (!got || *got != col) return false;
  }
  return true;
}

DType restrict_type(const DType& q, const std::vector<Node>& B) {
  DType out;
  for (const auto& [tuple, col] : q.eq) {
    if (std::all_of(tuple.begin(), tuple.end(), [&](Node x) { return std::find(B.begin(), B.end(), x) != B.end(); }))
      out.eq[tuple] = col;
  }
  return out;
}

bool is_complete_over(const PTriple& p, const DType& q, const std::vector<Node>& A) {
  const auto tuples = dtype_tuples(p, A);
  if (tuples.size() != q.eq.size()) return false;
  return std::all_of(tuples.begin(), tuples.end(), [&](const auto& t) { return q.eq.count(t) > 0; });
}

std::vector<DType> enumerate_complete_dtypes(const PTriple& p, const std::vector<Node>& A, Color colors,
                                             std::uint64_t budget) {
  if (colors == 0) throw Error(ErrorKind::InputError, "at least one color is needed");
  const auto tuples = dtype_tuples(p, A);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (total > budget / colors) throw Error(ErrorKind::BudgetExceeded, "too many complete d-types");
    total *= colors;
  }
  std::vector<DType> out;
  out.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    DType q;
    std::uint64_t rest = code;
    for (std::size_t i = tuples.size(); i-- > 0;) {
      q.eq[tuples[i]] = rest % colors;
      rest /= colors;
    }
    out.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------- Q operator

namespace {

std::string dtype_str(const Fragment& f, const DType& q) {
  std::string s;
  for (const auto& [tuple, col] : q.eq) {
    if (!s.empty()) s += ';';
    s += tuple_str(f, tuple) + "=" + std::to_string(col);
  }
  return s;
}

bool is_limit_position(int beta) { return beta == 0; }

/// The color of the empty-tuple equation (the restriction to the empty set).
std::optional<Color> bare_color(const DType& q) {
  auto it = q.eq.find({});
  if (it == q.eq.end()) return std::nullopt;
  return it->second;
}

bool satisfies_bare(const PTriple& p, Node t, const DType& q) {
  auto want = bare_color(q);
  auto got = d_of(p, {t});
  return want && got && *want == *got;
}

Color source_color(const PTriple& p, const std::vector<Ordinal>& lv) {
  std::vector<int> pos;
  for (const Ordinal& o : lv) {
    auto it = std::find(p.source_levels.begin(), p.source_levels.end(), o);
    if (it == p.source_levels.end()) return p.source.default_color;
    pos.push_back(static_cast<int>(it - p.source_levels.begin()));
  }
  return p.source(pos);
}

QNode parent_of(const QNode& a) {
  QNode b = a;
  b.eta.pop_back();
  b.gamma.erase(b.length());
  return b;
}

bool q_equivalent(const QNode& a, const QNode& b) {
  if (a.length() != b.length()) return false;
  if (a.length() == 0) return true;
  if (!(parent_of(a) == parent_of(b))) return false;
  const DType& ga = a.gamma.at(0);
  const DType& gb = b.gamma.at(0);
  if (bare_color(ga) != bare_color(gb)) return false;
  // The largest limit position below the length is 0, so the only tuples to
  // compare are the ones made of eta(0) alone.
  auto with_root = [](const QNode& n, const DType& g) -> std::optional<Color> {
    auto it = g.eq.find({n.eta[0]});
    if (it == g.eq.end()) return std::nullopt;
    return it->second;
  };
  return with_root(a, ga) == with_root(b, gb);
}

}  // namespace

std::string qnode_id(const PTriple& p, const QNode& a) {
  std::string s = "q[";
  for (int i = 0; i < a.length(); ++i) s += (i ? "," : "") + p.tree.id(a.eta[i]);
  s += "|";
  for (const auto& [pos, g] : a.gamma) s += std::to_string(pos) + ":" + dtype_str(p.tree, g);
  return s + "]";
}

std::vector<std::string> qnode_violations(const PTriple& p, const QNode& a) {
  const Fragment& f = p.tree;
  std::vector<std::string> out;
  auto add = [&](const char* name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  const int alpha = a.length();
  for (Node x : a.eta) {
    if (x < 0 || x >= f.size() || !is_suc_lim(f, x)) add("clause 1");
  }
  for (const auto& [pos, g] : a.gamma) {
    if (pos < 0 || pos >= alpha || !is_limit_position(pos)) add("clause 1");
  }
  for (int b = 0; b < alpha; ++b) {
    if (is_limit_position(b) && !a.gamma.count(b)) add("clause 1");
  }
  if (!out.empty()) return out;

  for (const auto& [pos, g] : a.gamma) {
    std::vector<Node> support(a.eta.begin(), a.eta.begin() + pos + 1);
    bool chain = true;
    for (std::size_t i = 1; i < support.size(); ++i) chain = chain && f.less(support[i - 1], support[i]);
    if (!chain || !is_complete_over(p, g, support)) add("clause 2");
  }
  if (alpha > 0 && !satisfies_bare(p, a.eta[0], a.gamma.at(0))) add("clause 3");
  for (int b = 1; b < alpha; ++b) {
    if (!f.less(a.eta[b - 1], a.eta[b])) add("clause 4");
  }
  // Clause 5 compares types at two limit positions; only position 0 is a limit here.
  for (int b = 1; b < alpha; ++b) {
    for (const auto& [pos, g] : a.gamma) {
      if (pos < b && !satisfies(p, a.eta[b], g)) add("clause 6");
    }
  }
  for (int b = 0; b < alpha; ++b) {
    for (Node t : suc_lim_nodes(f)) {
      if (!f.less(t, a.eta[b])) continue;
      bool above = true;
      for (int bp = 0; bp < b; ++bp) above = above && f.less(a.eta[bp], t);
      if (!above || !satisfies_bare(p, t, a.gamma.at(0))) continue;
      bool all = true;
      for (const auto& [pos, g] : a.gamma) {
        if (pos < b) all = all && satisfies(p, t, g);
      }
      if (all) add("clause 7");
    }
  }
  return out;
}

QFragment q_enumerate(const PTriple& p, int alpha_max, Color colors, std::uint64_t budget) {
  if (alpha_max < 0) throw Error(ErrorKind::InputError, "length bound must be non-negative");
  if (p.arity < 2) throw Error(ErrorKind::InputError, "the base coloring needs arity at least 2");
  const Fragment& f = p.tree;
  const auto pool = suc_lim_nodes(f);
  std::vector<QNode> all{QNode{}};
  std::vector<QNode> layer{QNode{}};
  for (int len = 1; len <= alpha_max; ++len) {
    std::vector<QNode> next;
    for (const QNode& parent : layer) {
      for (Node x : pool) {
        QNode cand = parent;
        cand.eta.push_back(x);
        std::vector<QNode> options;
        if (len == 1) {
          for (auto& g : enumerate_complete_dtypes(p, {x}, colors, budget)) {
            QNode o = cand;
            o.gamma[0] = std::move(g);
            options.push_back(std::move(o));
          }
        } else {
          options.push_back(std::move(cand));
        }
        for (auto& o : options) {
          if (all.size() + next.size() >= budget) throw Error(ErrorKind::BudgetExceeded, "Q fragment too large");
          if (qnode_violations(p, o).empty()) next.push_back(std::move(o));
        }
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }

  QFragment q;
  std::vector<TreeNodeSpec> specs;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<QNode, std::string> ids;
  for (const QNode& a : all) ids[a] = qnode_id(p, a);
  for (const QNode& a : all) {
    specs.push_back({ids[a], Ordinal::nat(static_cast<std::uint64_t>(a.length()))});
    if (a.length() > 0) edges.push_back({ids[parent_of(a)], ids[a]});
  }
  q.triple.tree = from_standard_tree(specs, edges);
  q.triple.arity = p.arity;
  q.triple.source = p.source;
  q.triple.source_levels = p.source_levels;
  q.nodes.resize(all.size());
  for (const QNode& a : all) q.nodes[q.triple.tree.node(ids[a])] = a;

  const Fragment& t = q.triple.tree;
  q.triple.e_class.assign(static_cast<std::size_t>(t.size()), -1);
  int next_class = 0;
  for (Node x = 0; x < t.size(); ++x) {
    if (q.triple.e_class[x] >= 0) continue;
    q.triple.e_class[x] = next_class;
    for (Node y = x + 1; y < t.size(); ++y) {
      if (q.triple.e_class[y] < 0 && q_equivalent(q.nodes[x], q.nodes[y])) q.triple.e_class[y] = next_class;
    }
    ++next_class;
  }

  for_each_chain(t, suc_lim_nodes(t), 1, p.arity, [&](const std::vector<Node>& tuple) {
    const QNode& last = q.nodes[tuple.back()];
    const DType& g = last.gamma.at(last.length() - 1);
    std::vector<Node> labels;
    std::vector<Ordinal> lv;
    for (Node x : tuple) {
      labels.push_back(q.nodes[x].eta.back());
      lv.push_back(t.level(x));
    }
    auto it = g.eq.find(labels);
    if (it == g.eq.end()) return;  // the type has no equation for these labels
    q.triple.d[tuple] = pair(it->second, source_color(p, lv));
  });
  return q;
}

QNode lift_element(const PTriple& p, Node t) {
  const Fragment& f = p.tree;
  if (t < 0 || t >= f.size() || !is_suc_lim(f, t))
    throw Error(ErrorKind::InputError, "lift needs a Suc_lim node");
  const Color own = *d_of(p, {t});
  const auto pool = suc_lim_nodes(f);
  QNode a;
  for (;;) {
    const int beta = a.length();
    std::optional<Node> pick;
    for (Node x : pool) {
      if (!f.less(x, t)) continue;
      if (beta > 0 && !f.less(a.eta.back(), x)) continue;
      if (d_of(p, {x}) != own) continue;
      if (beta > 0) {
        // x must realize the type that t has over eta(0).
        if (!satisfies(p, x, a.gamma.at(0))) continue;
      } else if (p.arity >= 2) {
        auto key = std::vector<Node>{x, t};
        if (!d_of(p, key)) continue;
      }
      if (!pick || f.less(x, *pick)) pick = x;
    }
    if (!pick) break;
    a.eta.push_back(*pick);
    if (beta == 0) a.gamma[0] = dtp(p, t, {*pick});
  }
  if (a.length() == 0) {
    DType g;
    for (const auto& tuple : dtype_tuples(p, {t})) g.eq[tuple] = tuple.empty() ? own : 0;
    a.gamma[0] = std::move(g);
  }
  a.eta.push_back(t);
  return a;
}

KeyClaimReport key_claim_check(const PTriple& base, const QFragment& q) {
  KeyClaimReport r;
  const Fragment& bf = base.tree;
  const Fragment& qf = q.triple.tree;
  std::map<std::string, Node> by_id;
  for (Node x = 0; x < qf.size(); ++x) by_id[qf.id(x)] = x;
  auto label = [&](Node v) { return q.nodes[v].eta.back(); };
  auto first_projection = [&](Node v) -> std::optional<std::uint64_t> {
    auto it = q.triple.d.find({v});
    if (it == q.triple.d.end()) return std::nullopt;
    return unpair(it->second).first;
  };
  auto link = [&](Node lo, Node hi) -> std::optional<Node> {
    auto m = qf.meet(lo, hi);
    if (!m) return std::nullopt;
    auto l = qf.lim(*m);
    if (!l || !qf.less(*l, hi)) return std::nullopt;
    return qf.suc(*l, hi);
  };

  // Windows from lifted sequences: u increasing in the base, t_i its lifts,
  // v_i = suc(lim(t_i meet t_{i+1}), t_{i+1}).
  for_each_chain(bf, suc_lim_nodes(bf), 2, 4, [&](const std::vector<Node>& u) {
    std::vector<Node> t;
    for (Node x : u) {
      auto it = by_id.find(qnode_id(base, lift_element(base, x)));
      if (it == by_id.end()) return;
      t.push_back(it->second);
    }
    ++r.lifted_windows;
    std::vector<Node> v;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      auto vi = link(t[i], t[i + 1]);
      if (!vi || !is_suc_lim(qf, *vi) || label(*vi) != u[i]) return;
      v.push_back(*vi);
    }
    ++r.qualifying;
    for (std::size_t i = 2; i < u.size(); ++i) {
      if (d_of(base, {u[i]}) != d_of(base, {u[1]})) ++r.constant_failures;
    }
    for (std::size_t i0 = 0; i0 < v.size(); ++i0) {
      for (std::size_t i1 = i0 + 1; i1 < u.size(); ++i1) {
        if (d_of(base, {u[i0], u[i1]}) != first_projection(v[i0])) ++r.equation_failures;
      }
    }
  });

  // Every emitted branch: its labels share the bare color, and the pair color
  // with the first label is the first projection of d at the level-1 node.
  for (Node w = 0; w < qf.size(); ++w) {
    const QNode& a = q.nodes[w];
    if (a.length() < 2) continue;
    ++r.branch_windows;
    for (int j = 1; j < a.length(); ++j) {
      if (d_of(base, {a.eta[j]}) != d_of(base, {a.eta[0]})) ++r.constant_failures;
    }
    const auto v = *qf.ancestor_at(w, Ordinal::nat(1));
    for (int j = 1; j < a.length(); ++j) {
      if (d_of(base, {a.eta[0], a.eta[j]}) != first_projection(v)) ++r.equation_failures;
    }
  }

  // Fans meeting at a limit: the links through the common limit are
  // neighbours but never E-equivalent once their labels are comparable.
  for (Node a = 0; a < qf.size(); ++a) {
    for (Node b = a + 1; b < qf.size(); ++b) {
      if (qf.comparable(a, b)) continue;
      auto m = qf.meet(a, b);
      if (!m || !qf.level(*m).is_limit()) continue;
      auto va = qf.suc(*m, a), vb = qf.suc(*m, b);
      if (!va || !vb || *va == *vb || !bf.comparable(label(*va), label(*vb))) continue;
      ++r.fan_windows;
      if (!neighbours(qf, *va, *vb) || q.triple.e_class[*va] == q.triple.e_class[*vb]) ++r.fan_failures;
    }
  }
  return r;
}

}  // namespace twb
