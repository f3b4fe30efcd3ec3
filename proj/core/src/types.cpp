#include "twb/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "twb/error.hpp"

namespace twb {

namespace {

void put(std::string& out, std::int64_t v) {
  // Zig-zag varint keeps codes short and platform independent.
  std::uint64_t z = (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
  do {
    std::uint8_t byte = z & 0x7f;
    z >>= 7;
    if (z) byte |= 0x80;
    out.push_back(static_cast<char>(byte));
  } while (z);
}

bool mask_on(const SortMask& mask, int s) { return s != kUnsorted && (mask.empty() || mask[s]); }

}  // namespace

TypeCode tp_code(const Fragment& f, const std::vector<Node>& tuple, const std::vector<Node>& A, int k,
                 const SortMask& mask) {
  const auto seeds = type_seeds(f, tuple, A);
  const auto list = closure_list(f, seeds, ClosureVariant::k, k, mask);
  std::map<Node, int> pos;
  for (std::size_t i = 0; i < list.size(); ++i) pos.emplace(list[i], static_cast<int>(i));
  auto at = [&](std::optional<Node> n) -> std::int64_t {
    if (!n) return -1;
    auto it = pos.find(*n);
    return it == pos.end() ? -2 : it->second;
  };

  std::string out;
  put(out, k);
  put(out, static_cast<std::int64_t>(tuple.size()));
  put(out, static_cast<std::int64_t>(A.size()));
  for (bool b : mask) put(out, b);
  for (Node s : seeds) put(out, pos.at(s));
  put(out, static_cast<std::int64_t>(f.constants().size()));
  for (const auto& [key, c] : f.constants()) {
    put(out, key.first);
    put(out, key.second);
    put(out, pos.at(c));
  }
  put(out, static_cast<std::int64_t>(list.size()));
  for (Node x : list) put(out, f.sort(x));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Node x = list[i];
    if (!mask_on(mask, f.sort(x))) continue;
    put(out, at(f.lim(x)));
    if (f.is_successor(x)) {
      for (int t : f.shape().children(f.sort(x))) {
        if (mask_on(mask, t)) put(out, at(f.g(x, t)));
      }
    }
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      const Node y = list[j];
      if (f.sort(y) != f.sort(x)) continue;
      put(out, f.less(x, y) ? 1 : f.less(y, x) ? 2 : 0);
      put(out, at(f.meet(x, y)));
    }
  }
  return out;
}

namespace {

/// Backtracking search for isomorphisms between two closed node sets.
class IsoSearch {
 public:
  IsoSearch(const Fragment& fA, std::vector<Node> ca, const Fragment& fB, std::vector<Node> cb,
            const SortMask& mask, int limit)
      : fA_(fA), fB_(fB), ca_(std::move(ca)), cb_(std::move(cb)), mask_(mask), limit_(limit) {
    inB_.assign(static_cast<std::size_t>(fB_.size()), 0);
    for (Node y : cb_) inB_[y] = 1;
    profileA_ = profile(fA_, ca_);
    profileB_ = profile(fB_, cb_);
  }

  bool seed(Node x, Node y) {
    if (auto it = fwd_.find(x); it != fwd_.end()) return it->second == y;
    if (bwd_.count(y)) return false;
    if (!compatible(x, y)) return false;
    fwd_[x] = y;
    bwd_[y] = x;
    return true;
  }

  int run() {
    recurse();
    return found_;
  }

  const Witness& first() const { return first_; }

 private:
  bool on(const Fragment& f, Node x) const { return mask_on(mask_, f.sort(x)); }

  std::optional<Node> mapped(Node x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
  }

  /// Per node of the closure: how many closure nodes of its sort lie below and above it.
  static std::vector<std::pair<int, int>> profile(const Fragment& f, const std::vector<Node>& cl) {
    std::vector<std::pair<int, int>> out(static_cast<std::size_t>(f.size()));
    for (Node x : cl) {
      for (Node u : cl) {
        if (f.sort(u) != f.sort(x) || f.sort(x) == kUnsorted) continue;
        if (f.less(u, x)) ++out[x].first;
        if (f.less(x, u)) ++out[x].second;
      }
    }
    return out;
  }

  /// Checks x -> y against every already mapped element.
  bool compatible(Node x, Node y) const {
    if (fA_.sort(x) != fB_.sort(y) || !inB_[y] || profileA_[x] != profileB_[y]) return false;
    const bool active = on(fA_, x);
    if (active && fA_.is_successor(x) != fB_.is_successor(y)) return false;
    if (active) {
      // lim
      auto lx = fA_.lim(x);
      auto ly = fB_.lim(y);
      if (lx.has_value() != ly.has_value()) return false;
      if (lx && *lx == x && *ly != y) return false;
      if (lx && *lx != x && *ly == y) return false;
      if (lx) {
        if (auto m = mapped(*lx); m && *m != *ly) return false;
      }
      for (int t : fA_.shape().children(fA_.sort(x))) {
        if (!mask_on(mask_, t) || !fA_.is_successor(x)) continue;
        auto gx = fA_.g(x, t);
        auto gy = fB_.g(y, t);
        if (gx.has_value() != gy.has_value()) return false;
        if (gx) {
          if (auto m = mapped(*gx); m && *m != *gy) return false;
        }
      }
    }
    for (const auto& [u, v] : fwd_) {
      if (fA_.sort(u) != fA_.sort(x)) {
        if (active && on(fA_, u) && fA_.shape().is_child(fA_.sort(u), fA_.sort(x)) && fA_.is_successor(u)) {
          auto gu = fA_.g(u, fA_.sort(x));
          if (gu && ((*gu == x) != (fB_.g(v, fA_.sort(x)) == std::optional<Node>(y)))) return false;
        }
        continue;
      }
      if (fA_.less(u, x) != fB_.less(v, y) || fA_.less(x, u) != fB_.less(y, v)) return false;
      if (!active) continue;
      if (fA_.lim(u) == std::optional<Node>(x) && fB_.lim(v) != std::optional<Node>(y)) return false;
      auto mA = fA_.meet(u, x);
      auto mB = fB_.meet(v, y);
      if (mA.has_value() != mB.has_value()) return false;
      if (mA) {
        if (*mA == u && *mB != v) return false;
        if (*mA == x && *mB != y) return false;
        if (auto m = mapped(*mA); m && *m != *mB) return false;
      }
    }
    return true;
  }

  /// Full check of a complete bijection.
  bool verify() const {
    for (const auto& [x, y] : fwd_) {
      if (!on(fA_, x)) continue;
      auto lx = fA_.lim(x);
      if (lx && (!fwd_.count(*lx) || fwd_.at(*lx) != fB_.lim(y))) return false;
      if (fA_.is_successor(x)) {
        for (int t : fA_.shape().children(fA_.sort(x))) {
          if (!mask_on(mask_, t)) continue;
          auto gx = fA_.g(x, t);
          if (gx && (!fwd_.count(*gx) || fwd_.at(*gx) != fB_.g(y, t))) return false;
        }
      }
      for (const auto& [u, v] : fwd_) {
        if (fA_.sort(u) != fA_.sort(x)) continue;
        if (fA_.less(u, x) != fB_.less(v, y)) return false;
        auto mA = fA_.meet(u, x);
        if (mA && (!fwd_.count(*mA) || fwd_.at(*mA) != fB_.meet(v, y))) return false;
      }
    }
    return true;
  }

  /// Next source element: one whose image is forced by a function value if possible.
  std::pair<Node, std::optional<Node>> pick() const {
    for (Node x : ca_) {
      if (fwd_.count(x)) continue;
      for (const auto& [u, v] : fwd_) {
        if (!on(fA_, u)) continue;
        if (fA_.lim(u) == std::optional<Node>(x)) return {x, fB_.lim(v)};
        if (fA_.sort(u) != fA_.sort(x) && fA_.shape().is_child(fA_.sort(u), fA_.sort(x)) &&
            fA_.is_successor(u) && fA_.g(u, fA_.sort(x)) == std::optional<Node>(x))
          return {x, fB_.g(v, fA_.sort(x))};
      }
    }
    for (Node x : ca_) {
      if (fwd_.count(x)) continue;
      for (const auto& [u, v] : fwd_) {
        for (const auto& [w, z] : fwd_) {
          if (u < w && on(fA_, u) && fA_.sort(u) == fA_.sort(w) && fA_.meet(u, w) == std::optional<Node>(x))
            return {x, fB_.meet(v, z)};
        }
      }
    }
    for (Node x : ca_) {
      if (!fwd_.count(x)) return {x, std::nullopt};
    }
    return {-1, std::nullopt};
  }

  void recurse() {
    if (found_ >= limit_) return;
    auto [x, forced] = pick();
    if (x < 0) {
      if (verify()) {
        if (found_ == 0) first_.assign(fwd_.begin(), fwd_.end());
        ++found_;
      }
      return;
    }
    std::vector<Node> cands;
    if (forced) {
      cands.push_back(*forced);
    } else {
      for (Node y : cb_) {
        if (!bwd_.count(y)) cands.push_back(y);
      }
    }
    for (Node y : cands) {
      if (bwd_.count(y) || !compatible(x, y)) continue;
      fwd_[x] = y;
      bwd_[y] = x;
      recurse();
      fwd_.erase(x);
      bwd_.erase(y);
      if (found_ >= limit_) return;
    }
  }

  const Fragment& fA_;
  const Fragment& fB_;
  std::vector<Node> ca_;
  std::vector<Node> cb_;
  const SortMask& mask_;
  int limit_;
  std::vector<char> inB_;
  std::vector<std::pair<int, int>> profileA_;
  std::vector<std::pair<int, int>> profileB_;
  std::map<Node, Node> fwd_;
  std::map<Node, Node> bwd_;
  int found_ = 0;
  Witness first_;
};

int search(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB, const std::vector<Node>& b, int k,
           int limit, const SortMask& mask, Witness* out) {
  if (a.size() != b.size()) return 0;
  std::set<std::pair<int, int>> keysA, keysB;
  for (const auto& [key, c] : fA.constants()) keysA.insert(key);
  for (const auto& [key, c] : fB.constants()) keysB.insert(key);
  if (keysA != keysB) return 0;
  auto ca = closure_list(fA, a, ClosureVariant::k, k, mask);
  auto cb = closure_list(fB, b, ClosureVariant::k, k, mask);
  if (ca.size() != cb.size()) return 0;
  IsoSearch s(fA, ca, fB, cb, mask, limit);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!s.seed(a[i], b[i])) return 0;
  }
  for (const auto& [key, c] : fA.constants()) {
    if (!s.seed(c, fB.constants().at(key))) return 0;
  }
  const int n = s.run();
  if (n > 0 && out) *out = s.first();
  return n;
}

}  // namespace

std::optional<Witness> equiv_k(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB,
                               const std::vector<Node>& b, int k, const SortMask& mask) {
  Witness w;
  if (search(fA, a, fB, b, k, 1, mask, &w) == 0) return std::nullopt;
  return w;
}

int count_isomorphisms(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB,
                       const std::vector<Node>& b, int k, int limit, const SortMask& mask) {
  return search(fA, a, fB, b, k, limit, mask, nullptr);
}

std::optional<Witness> equiv_over(const Fragment& f, const std::vector<Node>& a, const std::vector<Node>& b,
                                  const std::vector<Node>& A, int k) {
  return equiv_k(f, type_seeds(f, a, A), f, type_seeds(f, b, A), k);
}

std::uint64_t count_type_classes(const Fragment& f, const std::vector<Node>& A, int k, int n, std::uint64_t budget,
                                 const std::vector<Node>& domain) {
  std::vector<Node> dom = domain;
  if (dom.empty()) {
    for (Node x = 0; x < f.size(); ++x) dom.push_back(x);
  }
  double total = std::pow(static_cast<double>(dom.size()), n);
  if (total > static_cast<double>(budget))
    throw Error(ErrorKind::BudgetExceeded, std::to_string(static_cast<std::uint64_t>(total)) + " tuples");
  std::set<TypeCode> codes;
  std::vector<Node> tuple(static_cast<std::size_t>(n));
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      codes.insert(tp_code(f, tuple, A, k));
      return;
    }
    for (Node x : dom) {
      tuple[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return codes.size();
}

std::string Questionnaire::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < answers.size(); ++i) s += (i ? "," : "") + std::to_string(answers[i]);
  return s + ")";
}

namespace {

class QuestionList {
 public:
  QuestionList(const Fragment& f, const std::vector<Node>& A, int k) : f_(f), k_(k) {
    B_ = closure_list(f, type_seeds(f, {}, A), ClosureVariant::zero);
    for (std::size_t i = 0; i < B_.size(); ++i) pos_[B_[i]] = static_cast<std::int64_t>(i);
  }

  void answer(Node a, std::vector<std::int64_t>& out) const {
    if (auto it = pos_.find(a); it != pos_.end()) {
      out.insert(out.end(), {1, it->second});
      return;
    }
    if (f_.sort(a) == kUnsorted) {
      out.push_back(0);
      return;
    }
    const Node la = need(f_.lim(a), a);
    out.insert(out.end(), {2, dk(a, la)});
    std::optional<Node> up;
    std::optional<Node> down;
    for (Node b : B_) {
      if (f_.sort(b) != f_.sort(a)) continue;
      if (f_.less(a, b) && (!up || f_.less(b, *up))) up = b;
      if (f_.less(b, a) && (!down || f_.less(*down, b))) down = b;
    }
    if (up) {
      const bool same = need(f_.lim(*up), *up) == la;
      out.insert(out.end(), {3, pos_.at(*up), same});
      if (same) {
        out.push_back(dk(a, *up));
        out.insert(out.end(), {down ? pos_.at(*down) : -1, down ? dk(a, *down) : -1});
        return;
      }
      below(a, la, down, out);
      return;
    }
    std::optional<Node> best;
    for (Node b : B_) {
      if (f_.sort(b) != f_.sort(a)) continue;
      const Node m = need(f_.meet(a, b), b);
      if (!best || f_.less(*best, m)) best = m;
    }
    if (!best) {
      out.push_back(5);
      return;
    }
    out.push_back(4);
    answer(*best, out);
    const bool same = need(f_.lim(*best), *best) == la;
    out.push_back(same);
    out.push_back(same ? dk(a, *best) : -1);
  }

 private:
  void below(Node a, Node la, std::optional<Node> down, std::vector<std::int64_t>& out) const {
    if (!down) {
      out.push_back(-1);
      return;
    }
    const bool same = need(f_.lim(*down), *down) == la;
    out.insert(out.end(), {pos_.at(*down), same, same ? dk(a, *down) : -1});
  }

  std::int64_t dk(Node x, Node y) const {
    const std::int64_t cap = 2 * static_cast<std::int64_t>(k_) + 1;
    auto d = distance(f_, x, y);
    if (!d) return cap;
    return std::min<std::int64_t>(static_cast<std::int64_t>(*d), cap);
  }

  Node need(std::optional<Node> v, Node at) const {
    if (!v) throw Error(ErrorKind::NotClosed, "missing value at '" + f_.id(at) + "'");
    return *v;
  }

  const Fragment& f_;
  int k_;
  std::vector<Node> B_;
  std::map<Node, std::int64_t> pos_;
};

}  // namespace

Questionnaire questionnaire_code(const Fragment& f, Node a, const std::vector<Node>& A, int k) {
  if (f.shape().size() != 1) throw Error(ErrorKind::WrongShape, "questionnaire needs exactly one sort");
  Questionnaire q;
  QuestionList(f, A, k).answer(a, q.answers);
  return q;
}

int estimate_degree(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& series) {
  if (series.size() < 4) throw Error(ErrorKind::BadSeries, "need at least 4 points");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].first == 0 || series[i].second == 0) throw Error(ErrorKind::BadSeries, "zero entry");
    if (i > 0 && (series[i].first <= series[i - 1].first || series[i].second < series[i - 1].second))
      throw Error(ErrorKind::BadSeries, "series is not monotone at point " + std::to_string(i));
  }
  // Max log-log slope over consecutive pairs in the last half, rounded to
  // nearest with ties going down.
  double best = 0.0;
  for (std::size_t i = series.size() / 2; i < series.size(); ++i) {
    if (i == 0) continue;
    const double dx = std::log(static_cast<double>(series[i].first) / static_cast<double>(series[i - 1].first));
    const double dy = std::log(static_cast<double>(series[i].second) / static_cast<double>(series[i - 1].second));
    best = std::max(best, dy / dx);
  }
  const int d = static_cast<int>(std::ceil(best - 0.5 - 1e-9));
  return std::max(0, d);
}

}  // namespace twb
