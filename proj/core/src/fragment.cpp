#include "twb/fragment.hpp"

#include <algorithm>

#include "twb/error.hpp"

namespace twb {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::base: return "base";
    case Mode::theta: return "theta";
    case Mode::classT: return "classT";
  }
  return "base";
}

Mode parse_mode(const std::string& s) {
  if (s == "base") return Mode::base;
  if (s == "theta") return Mode::theta;
  if (s == "classT") return Mode::classT;
  throw Error(ErrorKind::InputError, "unknown mode '" + s + "'");
}

Fragment::Fragment(Shape shape) : shape_(std::move(shape)) { by_sort_.resize(shape_.size()); }

Node Fragment::push_node(const std::string& id, int sort, const Ordinal& level) {
  if (index_.count(id)) throw Error(ErrorKind::InputError, "duplicate node id '" + id + "'");
  if (sort != kUnsorted && (sort < 0 || sort >= shape_.size()))
    throw Error(ErrorKind::UnknownIndex, "sort " + std::to_string(sort) + " for node '" + id + "'");
  const Node n = size();
  ids_.push_back(id);
  sorts_.push_back(sort);
  levels_.push_back(sort == kUnsorted ? Ordinal() : level);
  index_[id] = n;
  if (sort != kUnsorted) by_sort_[sort].push_back(n);
  for (auto& b : below_) b.push_back(false);
  below_.emplace_back(static_cast<std::size_t>(n + 1));
  return n;
}

Node Fragment::add_node(const std::string& id, int sort, const Ordinal& level) {
  return push_node(id, sort, level);
}

std::optional<Node> Fragment::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Node Fragment::node(const std::string& id) const {
  auto f = find(id);
  if (!f) throw Error(ErrorKind::InputError, "unknown node '" + id + "'");
  return *f;
}

std::vector<Node> Fragment::nodes_by_id() const {
  std::vector<Node> out;
  out.reserve(index_.size());
  for (const auto& [id, n] : index_) out.push_back(n);
  return out;
}

std::string Fragment::fresh_id(const std::string& prefix) const {
  for (int i = size();; ++i) {
    std::string cand = prefix + std::to_string(i);
    if (!index_.count(cand)) return cand;
  }
}

void Fragment::add_edge(Node lo, Node hi) {
  Bits add = below_.at(lo);
  add.set(static_cast<std::size_t>(lo));
  for (Node y = 0; y < size(); ++y) {
    if (y == hi || below_[y].test(static_cast<std::size_t>(hi))) below_[y] |= add;
  }
}

std::vector<Node> Fragment::ancestors(Node n) const {
  std::vector<Node> out;
  const Bits& b = below_.at(n);
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<Node>(i));
  std::sort(out.begin(), out.end(), [&](Node a, Node c) { return levels_[a] < levels_[c]; });
  return out;
}

std::optional<Node> Fragment::ancestor_at(Node n, const Ordinal& lvl) const {
  if (levels_.at(n) == lvl) return n;
  if (levels_[n] < lvl) return std::nullopt;
  const Bits& b = below_[n];
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) {
    if (levels_[i] == lvl) return static_cast<Node>(i);
  }
  return std::nullopt;
}

std::optional<Node> Fragment::ancestor_below(Node n, const Ordinal& lvl) const {
  std::optional<Node> best;
  const Bits& b = below_.at(n);
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) {
    if (levels_[i] < lvl && (!best || levels_[*best] < levels_[i])) best = static_cast<Node>(i);
  }
  return best;
}

std::vector<std::pair<Node, Node>> Fragment::covering_edges() const {
  std::vector<std::pair<Node, Node>> out;
  for (Node hi = 0; hi < size(); ++hi) {
    const Bits& b = below_[hi];
    for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) {
      // lo covers-below hi when nothing lies strictly between them.
      Bits between = b & ~below_[i];
      between.reset(i);
      bool direct = true;
      for (auto j = between.find_first(); j != Bits::npos; j = between.find_next(j)) {
        if (below_[j].test(i)) {
          direct = false;
          break;
        }
      }
      if (direct) out.emplace_back(static_cast<Node>(i), hi);
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::tie(ids_[a.first], ids_[a.second]) < std::tie(ids_[b.first], ids_[b.second]);
  });
  return out;
}

namespace {
std::pair<Node, Node> unordered_key(Node a, Node b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
}  // namespace

void Fragment::declare_meet(Node a, Node b, Node m) { meet_[unordered_key(a, b)] = m; }
void Fragment::declare_suc(Node x, Node y, Node s) { suc_[{x, y}] = s; }
void Fragment::declare_pre(Node x, Node p) { pre_[x] = p; }
void Fragment::declare_lim(Node x, Node l) { lim_[x] = l; }
void Fragment::declare_g(Node x, int target_sort, Node v) { g_[{x, target_sort}] = v; }
void Fragment::declare_constant(int sort, int i, Node c) { constants_[{sort, i}] = c; }
void Fragment::erase_meet(Node a, Node b) { meet_.erase(unordered_key(a, b)); }
void Fragment::erase_g(Node x, int target_sort) { g_.erase({x, target_sort}); }

std::optional<Node> Fragment::constant(int sort, int i) const {
  auto it = constants_.find({sort, i});
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

bool Fragment::is_constant(Node n) const {
  for (const auto& [k, v] : constants_) {
    if (v == n) return true;
  }
  return false;
}

std::optional<Node> Fragment::meet(Node a, Node b) const {
  if (sorts_.at(a) == kUnsorted || sorts_.at(a) != sorts_.at(b)) return std::nullopt;
  if (leq(a, b)) return a;
  if (leq(b, a)) return b;
  if (auto it = meet_.find(unordered_key(a, b)); it != meet_.end()) return it->second;
  if (!meet_closed_) return std::nullopt;
  const Bits common = below_[a] & below_[b];
  std::optional<Node> best;
  for (auto i = common.find_first(); i != Bits::npos; i = common.find_next(i)) {
    if (!best || levels_[*best] < levels_[i]) best = static_cast<Node>(i);
  }
  return best;
}

std::optional<Node> Fragment::suc(Node x, Node y) const {
  if (auto it = suc_.find({x, y}); it != suc_.end()) return it->second;
  if (sorts_.at(x) == kUnsorted || sorts_[x] != sorts_.at(y) || !less(x, y)) return std::nullopt;
  return ancestor_at(y, levels_[x].successor());
}

std::optional<Node> Fragment::pre(Node x) const {
  if (auto it = pre_.find(x); it != pre_.end()) return it->second;
  if (!is_successor(x)) return std::nullopt;
  return ancestor_at(x, levels_[x].predecessor());
}

std::optional<Node> Fragment::lim(Node x) const {
  if (auto it = lim_.find(x); it != lim_.end()) return it->second;
  if (sorts_.at(x) == kUnsorted) return std::nullopt;
  return ancestor_at(x, levels_[x].limb_level());
}

std::optional<Node> Fragment::g(Node x, int target_sort) const {
  if (auto it = g_.find({x, target_sort}); it != g_.end()) return it->second;
  return std::nullopt;
}

Node Fragment::insert_on_branch(Node y, const Ordinal& lvl, const std::string& id) {
  const int s = sort(y);
  std::vector<Node> above;
  for (Node w : by_sort_.at(s)) {
    if (w == y) {
      above.push_back(w);
      continue;
    }
    auto m = meet(y, w);
    if (!m) throw Error(ErrorKind::CannotComplete, "meet of '" + ids_[y] + "' and '" + ids_[w] + "' unknown");
    if (lvl < levels_[*m]) above.push_back(w);
  }
  Bits lower(static_cast<std::size_t>(size()));
  const Bits& b = below_[y];
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) {
    if (levels_[i] < lvl) lower.set(i);
  }
  const Node z = push_node(id, s, lvl);
  lower.push_back(false);
  below_[z] = lower;
  for (Node w : above) below_[w].set(static_cast<std::size_t>(z));
  return z;
}

Node Fragment::insert_leaf(int sort, Node parent, const Ordinal& lvl, const std::string& id) {
  const Node z = push_node(id, sort, lvl);
  if (parent >= 0) {
    below_[z] = below_[parent];
    below_[z].set(static_cast<std::size_t>(parent));
  }
  return z;
}

Node Fragment::insert_below_all(int sort, const std::vector<Node>& above, const Ordinal& lvl,
                                const std::string& id) {
  const Node z = push_node(id, sort, lvl);
  for (Node w : above) below_[w].set(static_cast<std::size_t>(z));
  return z;
}

bool Fragment::operator==(const Fragment& rhs) const {
  return shape_ == rhs.shape_ && mode_ == rhs.mode_ && theta_bound_ == rhs.theta_bound_ && ids_ == rhs.ids_ &&
         sorts_ == rhs.sorts_ && levels_ == rhs.levels_ && below_ == rhs.below_ && meet_ == rhs.meet_ &&
         suc_ == rhs.suc_ && pre_ == rhs.pre_ && lim_ == rhs.lim_ && g_ == rhs.g_ && constants_ == rhs.constants_;
}

Fragment from_standard_tree(const std::vector<TreeNodeSpec>& nodes,
                            const std::vector<std::pair<std::string, std::string>>& edges, const Shape& shape,
                            int sort) {
  Fragment f(shape);
  for (const auto& n : nodes) f.add_node(n.id, sort, n.level);
  for (const auto& [a, b] : edges) {
    auto lo = f.find(a);
    auto hi = f.find(b);
    if (!lo || !hi) throw Error(ErrorKind::InvalidTree, "edge mentions unknown node '" + (lo ? b : a) + "'");
    f.add_edge(*lo, *hi);
  }
  for (Node x = 0; x < f.size(); ++x) {
    if (f.less(x, x)) throw Error(ErrorKind::InvalidTree, "order has a cycle through '" + f.id(x) + "'");
    auto anc = f.ancestors(x);
    for (Node a : anc) {
      if (!(f.level(a) < f.level(x)))
        throw Error(ErrorKind::InvalidTree, "level of '" + f.id(a) + "' not below level of '" + f.id(x) + "'");
    }
    for (std::size_t i = 1; i < anc.size(); ++i) {
      if (!f.less(anc[i - 1], anc[i]))
        throw Error(ErrorKind::InvalidTree, "predecessors of '" + f.id(x) + "' do not form a chain");
    }
  }
  bool closed = true;
  for (Node x = 0; x < f.size(); ++x) {
    if (auto l = f.lim(x)) f.declare_lim(x, *l);
    if (auto p = f.pre(x)) f.declare_pre(x, *p);
    for (Node y = 0; y < f.size(); ++y) {
      if (f.less(x, y)) {
        if (auto s = f.suc(x, y)) f.declare_suc(x, y, *s);
      } else if (x < y && !f.less(y, x)) {
        std::optional<Node> best;
        for (Node a : f.ancestors(x)) {
          if (f.less(a, y)) best = a;
        }
        if (best)
          f.declare_meet(x, y, *best);
        else
          closed = false;
      }
    }
  }
  f.set_meet_closed(closed);
  return f;
}

std::optional<std::uint64_t> distance(const Fragment& f, Node x, Node y) {
  if (f.sort(x) == kUnsorted || f.sort(x) != f.sort(y))
    throw Error(ErrorKind::SortError, "distance between different sorts");
  if (!f.comparable(x, y)) throw Error(ErrorKind::Incomparable, "'" + f.id(x) + "' and '" + f.id(y) + "'");
  const Node lo = f.leq(x, y) ? x : y;
  const Node hi = lo == x ? y : x;
  return Ordinal::finite_gap(f.level(lo), f.level(hi));
}

}  // namespace twb
