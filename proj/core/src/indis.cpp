#include "twb/indis.hpp"

#include <algorithm>
#include <map>

#include "twb/error.hpp"
#include "twb/types.hpp"

namespace twb {

namespace {

void require_one_sort(const Fragment& f, const std::vector<Node>& seq) {
  for (Node x : seq) {
    if (f.sort(x) != f.sort(seq.front()))
      throw Error(ErrorKind::SortError, "window mixes the sorts of '" + f.id(seq.front()) + "' and '" + f.id(x) + "'");
  }
}

/// Visits every increasing index tuple of the given length over [0, n) whose
/// consecutive entries differ by at least `gap`. Stops when fn returns false.
bool for_each_tuple(int n, int len, int gap, const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> idx;
  std::function<bool(int)> rec = [&](int from) {
    if (static_cast<int>(idx.size()) == len) return fn(idx);
    for (int i = from; i < n; ++i) {
      idx.push_back(i);
      const bool go = rec(i + gap);
      idx.pop_back();
      if (!go) return false;
    }
    return true;
  };
  return rec(0);
}

std::vector<Node> pick(const std::vector<Node>& seq, const std::vector<int>& idx) {
  std::vector<Node> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(seq[static_cast<std::size_t>(i)]);
  return out;
}

/// All gap-respecting tuples of each length up to the arity share one code.
bool uniform_types(const Fragment& f, const std::vector<Node>& seq, int k, int r, int gap) {
  const int n = static_cast<int>(seq.size());
  for (int len = 1; len <= r; ++len) {
    std::optional<TypeCode> ref;
    const bool ok = for_each_tuple(n, len, gap, [&](const std::vector<int>& idx) {
      TypeCode c = tp_code(f, pick(seq, idx), {}, k);
      if (!ref) {
        ref = std::move(c);
        return true;
      }
      return *ref == c;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool is_indiscernible(const Fragment& f, const Window& w) {
  if (w.seq.empty()) return true;
  require_one_sort(f, w.seq);
  return uniform_types(f, w.seq, w.rank, w.arity, 1);
}

bool is_NI(const Fragment& f, const Window& w) {
  if (w.seq.empty()) return true;
  require_one_sort(f, w.seq);
  if (!uniform_types(f, w.seq, w.rank, w.arity, std::max(1, w.gap))) return false;
  const int n = static_cast<int>(w.seq.size());
  for (int len = 1; len <= w.arity && len <= n; ++len) {
    const std::vector<Node> first(w.seq.begin(), w.seq.begin() + len);
    const TypeCode ref = tp_code(f, first, {}, w.rank);
    for (int i = 1; i + len <= n; ++i) {
      const std::vector<Node> block(w.seq.begin() + i, w.seq.begin() + i + len);
      if (tp_code(f, block, {}, w.rank) != ref) return false;
    }
  }
  return true;
}

std::vector<Term> default_hni_terms(const Fragment& f, int sort) {
  const Term x0 = Term::var(0, sort), x1 = Term::var(1, sort);
  const Term past_limb = Term::suc(Term::lim(Term::meet(x0, x1)), x1);
  std::vector<Term> out{Term::meet(x0, x1), past_limb};
  for (int t : f.shape().children(sort)) out.push_back(Term::g(past_limb, t));
  return out;
}

bool is_HNI(const Fragment& f, const Window& w, const std::vector<Term>& terms) {
  if (!is_NI(f, w)) return false;
  for (const Term& t : terms) {
    const int m = variable_count(Formula::eq(t, t));
    Window derived = w;
    derived.seq.clear();
    for (std::size_t i = 0; i + static_cast<std::size_t>(m) <= w.seq.size(); ++i) {
      const std::vector<Node> args(w.seq.begin() + static_cast<long>(i), w.seq.begin() + static_cast<long>(i) + m);
      auto v = eval_term(f, t, args);
      if (!v) return false;
      derived.seq.push_back(*v);
    }
    if (!is_NI(f, derived)) return false;
  }
  return true;
}

const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::Fan: return "Fan";
    case Pattern::AlmostIncreasing: return "AlmostIncreasing";
    case Pattern::Neither: return "Neither";
  }
  return "?";
}

Classification classify(const Fragment& f, const std::vector<Node>& seq) {
  Classification out;
  const std::size_t L = seq.size();
  std::optional<Node> common;
  bool fan = true;
  for (std::size_t i = 0; i < L && fan; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      auto m = f.meet(seq[i], seq[j]);
      if (!m) return out;
      if (!common) common = m;
      if (*common != *m) {
        fan = false;
        break;
      }
    }
  }
  if (fan) {
    out.pattern = Pattern::Fan;
    out.fan_meet = common;
    return out;
  }
  for (std::size_t i = 0; i + 1 < L; ++i) {
    auto m = f.meet(seq[i], seq[i + 1]);
    if (!m) return out;
    out.meet_chain.push_back(*m);
  }
  for (std::size_t i = 0; i + 1 < out.meet_chain.size(); ++i) {
    if (!f.less(out.meet_chain[i], out.meet_chain[i + 1])) {
      out.meet_chain.clear();
      return out;
    }
  }
  out.pattern = Pattern::AlmostIncreasing;
  return out;
}

std::vector<Node> h_map(const Fragment& f, const std::vector<Node>& seq) {
  if (classify(f, seq).pattern != Pattern::AlmostIncreasing)
    throw Error(ErrorKind::NotAlmostIncreasing, "window is not almost increasing");
  const int s = f.sort(seq.front());
  const auto& kids = f.shape().children(s);
  if (kids.empty()) throw Error(ErrorKind::ShapeExhausted, "sort '" + f.shape().id(s) + "' has no next sort");
  if (kids.size() > 1) throw Error(ErrorKind::WrongShape, "sort '" + f.shape().id(s) + "' has several next sorts");
  std::vector<Node> out;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const Node m = *f.meet(seq[i], seq[i + 1]);
    auto l = f.lim(m);
    if (!l) throw Error(ErrorKind::NotClosed, "lim of '" + f.id(m) + "' missing");
    auto u = f.suc(*l, seq[i + 1]);
    if (!u) throw Error(ErrorKind::NotClosed, "suc of '" + f.id(*l) + "' toward '" + f.id(seq[i + 1]) + "' missing");
    auto g = f.g(*u, kids.front());
    if (!g) throw Error(ErrorKind::NotClosed, "G of '" + f.id(*u) + "' missing");
    out.push_back(*g);
  }
  return out;
}

HTrace h_iterate(const Fragment& f, const std::vector<Node>& seq, int max_iter) {
  HTrace trace;
  auto record = [&](std::vector<Node> s) {
    HStep step{std::move(s), {}, {}};
    step.classification = classify(f, step.seq);
    if (!step.seq.empty()) step.first_level = f.level(step.seq.front());
    trace.steps.push_back(std::move(step));
  };
  record(seq);
  for (int iter = 0;; ++iter) {
    const HStep& cur = trace.steps.back();
    if (cur.classification.pattern == Pattern::Fan) {
      trace.stop = "fan";
      break;
    }
    if (iter >= max_iter) {
      trace.stop = "iteration limit";
      break;
    }
    const int s = f.sort(cur.seq.front());
    if (f.shape().children(s).empty()) {
      trace.stop = "shape exhausted";
      break;
    }
    record(h_map(f, cur.seq));
  }
  return trace;
}

void for_each_indiscernible(const Fragment& f, const std::vector<Node>& A, int L, int k, int r,
                            const std::function<bool(const std::vector<Node>&)>& visit, std::uint64_t budget) {
  if (L < 2) return;
  std::vector<Node> pool;
  for (Node x : A) {
    if (f.sort(x) != kUnsorted) pool.push_back(x);
  }
  std::sort(pool.begin(), pool.end(), [&](Node a, Node b) { return f.id(a) < f.id(b); });
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  std::map<std::vector<Node>, TypeCode> cache;
  auto code = [&](std::vector<Node> t) -> const TypeCode& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, tp_code(f, t, {}, k)).first;
    return it->second;
  };
  std::vector<Node> seq;
  std::vector<TypeCode> ref(static_cast<std::size_t>(r) + 1);
  std::uint64_t work = 0;
  bool stop = false;

  // Checks every tuple of length <= r that ends at the newest entry.
  auto consistent = [&]() {
    const int p = static_cast<int>(seq.size()) - 1;
    for (int len = 1; len <= r && len <= p + 1; ++len) {
      if (len == p + 1) {
        ref[static_cast<std::size_t>(len)] = code(seq);
        continue;
      }
      const bool ok = for_each_tuple(p, len - 1, 1, [&](const std::vector<int>& idx) {
        auto t = pick(seq, idx);
        t.push_back(seq.back());
        return code(t) == ref[static_cast<std::size_t>(len)];
      });
      if (!ok) return false;
    }
    return true;
  };

  std::function<void()> rec = [&]() {
    if (static_cast<int>(seq.size()) == L) {
      stop = !visit(seq);
      return;
    }
    for (Node x : pool) {
      if (stop) return;
      if (std::find(seq.begin(), seq.end(), x) != seq.end()) continue;
      if (!seq.empty() && f.sort(x) != f.sort(seq.front())) continue;
      if (++work > budget) throw Error(ErrorKind::BudgetExceeded, "indiscernible search budget");
      seq.push_back(x);
      if (consistent()) rec();
      seq.pop_back();
    }
  };
  rec();
}

std::optional<Window> search_indiscernible(const Fragment& f, const std::vector<Node>& A, int L, int k, int r,
                                           std::uint64_t budget) {
  std::optional<Window> found;
  for_each_indiscernible(
      f, A, L, k, r,
      [&](const std::vector<Node>& s) {
        found = Window{s, k, r, 1};
        return false;
      },
      budget);
  return found;
}

}  // namespace twb
