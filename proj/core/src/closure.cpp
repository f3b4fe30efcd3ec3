#include "twb/closure.hpp"

#include <algorithm>
#include <limits>

#include "twb/error.hpp"

namespace twb {

ClosureEngine::ClosureEngine(const Fragment& f, SortMask mask) : f_(&f), mask_(std::move(mask)) {}

Node ClosureEngine::need_meet(Node a, Node b) {
  if (auto m = f_->meet(a, b)) return *m;
  throw Error(ErrorKind::NotClosed, "meet of '" + f_->id(a) + "' and '" + f_->id(b) + "' missing");
}

Node ClosureEngine::need_lim(Node x) {
  if (auto l = f_->lim(x)) return *l;
  throw Error(ErrorKind::NotClosed, "lim of '" + f_->id(x) + "' missing");
}

Node ClosureEngine::need_g(Node x, int target) {
  if (auto v = f_->g(x, target)) return *v;
  throw Error(ErrorKind::NotClosed, "G of '" + f_->id(x) + "' into " + f_->shape().id(target) + " missing");
}

Node ClosureEngine::need_suc(Node x, Node y) {
  if (auto s = f_->suc(x, y)) return *s;
  throw Error(ErrorKind::NotClosed, "suc of '" + f_->id(x) + "' toward '" + f_->id(y) + "' missing");
}

Node ClosureEngine::need_pre(Node x) {
  if (auto p = f_->pre(x)) return *p;
  throw Error(ErrorKind::NotClosed, "pre of '" + f_->id(x) + "' missing");
}

bool ClosureEngine::add(Node n) {
  if (static_cast<std::size_t>(n) >= in_list_.size()) in_list_.resize(static_cast<std::size_t>(n) + 1, 0);
  if (in_list_[n]) return false;
  in_list_[n] = 1;
  list_.push_back(n);
  return true;
}

bool ClosureEngine::step_wedge() {
  bool grew = false;
  const std::size_t n = list_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Node a = list_[i];
    if (!active(f_->sort(a))) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Node b = list_[j];
      if (f_->sort(b) != f_->sort(a) || f_->comparable(a, b)) continue;
      grew |= add(need_meet(a, b));
    }
  }
  return grew;
}

bool ClosureEngine::step_lim() {
  bool grew = false;
  const std::size_t n = list_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (active(f_->sort(list_[i]))) grew |= add(need_lim(list_[i]));
  }
  return grew;
}

bool ClosureEngine::step_g() {
  bool grew = false;
  const std::size_t n = list_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Node x = list_[i];
    const int s = f_->sort(x);
    if (!active(s) || !f_->is_successor(x)) continue;
    for (int t : f_->shape().children(s)) {
      if (active(t)) grew |= add(need_g(x, t));
    }
  }
  return grew;
}

bool ClosureEngine::step_suc() {
  bool grew = false;
  const std::size_t n = list_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Node x = list_[i];
    if (!active(f_->sort(x))) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const Node y = list_[j];
      if (f_->sort(y) == f_->sort(x) && f_->less(x, y)) grew |= add(need_suc(x, y));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Node x = list_[i];
    if (active(f_->sort(x)) && f_->is_successor(x)) grew |= add(need_pre(x));
  }
  return grew;
}

void ClosureEngine::zero() {
  const int rounds = std::max(1, f_->shape().longest_branch());
  for (int r = 0; r < rounds; ++r) {
    bool grew = step_wedge();
    grew |= step_lim();
    grew |= step_g();
    if (!grew) break;
  }
}

std::vector<Node> ClosureEngine::run(const std::vector<Node>& seeds, ClosureVariant variant, int k) {
  list_.clear();
  in_list_.assign(static_cast<std::size_t>(f_->size()), 0);
  for (Node s : seeds) add(s);
  const bool with_constants =
      variant == ClosureVariant::zero || variant == ClosureVariant::one || variant == ClosureVariant::k;
  if (with_constants) {
    for (const auto& [key, c] : f_->constants()) add(c);
  }
  switch (variant) {
    case ClosureVariant::wedge: step_wedge(); break;
    case ClosureVariant::lim: step_lim(); break;
    case ClosureVariant::G: step_g(); break;
    case ClosureVariant::suc: step_suc(); break;
    case ClosureVariant::zero: zero(); break;
    case ClosureVariant::one:
      step_suc();
      zero();
      break;
    case ClosureVariant::k:
      zero();
      for (int i = 0; i < k; ++i) {
        if (!step_suc()) break;
        zero();
      }
      break;
  }
  return list_;
}

std::vector<Node> closure_list(const Fragment& f, const std::vector<Node>& seeds, ClosureVariant variant, int k,
                               const SortMask& mask) {
  ClosureEngine e(f, mask);
  return e.run(seeds, variant, k);
}

std::vector<Node> closure(const Fragment& f, const std::vector<Node>& A, ClosureVariant variant, int k) {
  auto out = closure_list(f, A, variant, k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Node> type_seeds(const Fragment& f, const std::vector<Node>& tuple, const std::vector<Node>& A) {
  std::vector<Node> seeds = tuple;
  std::vector<Node> params = A;
  std::sort(params.begin(), params.end(), [&](Node a, Node b) { return f.id(a) < f.id(b); });
  seeds.insert(seeds.end(), params.begin(), params.end());
  return seeds;
}

namespace {
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}
}  // namespace

std::uint64_t closure_size_bound(const Shape& shape, int num_constants, int n, int k) {
  // Per round: meets of m tree elements add < m, lims at most double, and each
  // successor gains one G-value per child index.
  std::uint64_t fanout = 1;
  for (int i = 0; i < shape.size(); ++i) fanout = std::max<std::uint64_t>(fanout, shape.children(i).size());
  const std::uint64_t per_round = 4 * (1 + fanout);
  std::uint64_t factor = 1;
  for (int r = 0; r < std::max(1, shape.longest_branch()); ++r) factor = sat_mul(factor, per_round);
  std::uint64_t m = sat_mul(static_cast<std::uint64_t>(n + num_constants), factor);
  for (int i = 0; i < k; ++i) m = sat_mul(sat_add(sat_mul(m, m), sat_mul(2, m)), factor);
  return m;
}

}  // namespace twb
