#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twb/ordinal.hpp"
#include "twb/shape.hpp"

namespace twb {

using Node = int;
inline constexpr int kUnsorted = -1;

enum class Mode { base, theta, classT };
const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

/// One broken axiom: `name` identifies the axiom, `detail` names the witnesses.
struct Violation {
  std::string name;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

/// Finite partial structure for the many-sorted tree language over a shape.
///
/// The order is kept as a transitively closed relation (one bitset of strict
/// predecessors per node). Function tables hold only declared values; the
/// `meet`, `suc`, `pre` and `lim` accessors additionally derive values that
/// the order and the levels force.
class Fragment {
 public:
  using Bits = boost::dynamic_bitset<>;

  explicit Fragment(Shape shape = {});

  const Shape& shape() const { return shape_; }
  Mode mode() const { return mode_; }
  void set_mode(Mode m) { mode_ = m; }
  int theta_bound() const { return theta_bound_; }
  void set_theta_bound(int b) { theta_bound_ = b; }

  // ---- nodes
  /// Adds a node; `sort` is a shape index or kUnsorted. Throws InputError on a duplicate id.
  Node add_node(const std::string& id, int sort, const Ordinal& level = {});
  int size() const { return static_cast<int>(ids_.size()); }
  const std::string& id(Node n) const { return ids_.at(n); }
  std::optional<Node> find(const std::string& id) const;
  /// Throws InputError naming the id.
  Node node(const std::string& id) const;
  int sort(Node n) const { return sorts_.at(n); }
  const Ordinal& level(Node n) const { return levels_.at(n); }
  const std::vector<Node>& nodes_of_sort(int s) const { return by_sort_.at(s); }
  /// Nodes ordered by id (the canonical order used for serialization and searches).
  std::vector<Node> nodes_by_id() const;
  /// A fresh id with the given prefix, unused so far.
  std::string fresh_id(const std::string& prefix) const;

  // ---- order
  void add_edge(Node lo, Node hi);
  bool less(Node a, Node b) const { return below_.at(b).test(static_cast<std::size_t>(a)); }
  bool leq(Node a, Node b) const { return a == b || less(a, b); }
  bool comparable(Node a, Node b) const { return leq(a, b) || leq(b, a); }
  const Bits& below(Node n) const { return below_.at(n); }
  /// Strict predecessors sorted by level (ascending).
  std::vector<Node> ancestors(Node n) const;
  /// Ancestor-or-self of n sitting exactly at the given level, if present.
  std::optional<Node> ancestor_at(Node n, const Ordinal& lvl) const;
  /// Maximal strict ancestor of n with level < lvl.
  std::optional<Node> ancestor_below(Node n, const Ordinal& lvl) const;
  /// Covering pairs of the order (the Hasse diagram), sorted by (id, id).
  std::vector<std::pair<Node, Node>> covering_edges() const;

  // ---- declared tables
  void declare_meet(Node a, Node b, Node m);
  void declare_suc(Node x, Node y, Node s);
  void declare_pre(Node x, Node p);
  void declare_lim(Node x, Node l);
  void declare_g(Node x, int target_sort, Node v);
  void declare_constant(int sort, int i, Node c);
  void erase_meet(Node a, Node b);
  void erase_g(Node x, int target_sort);

  const std::map<std::pair<Node, Node>, Node>& meet_table() const { return meet_; }
  const std::map<std::pair<Node, Node>, Node>& suc_table() const { return suc_; }
  const std::map<Node, Node>& pre_table() const { return pre_; }
  const std::map<Node, Node>& lim_table() const { return lim_; }
  /// Keyed by (source node, target shape index).
  const std::map<std::pair<Node, int>, Node>& g_table() const { return g_; }
  /// Keyed by (shape index, constant number).
  const std::map<std::pair<int, int>, Node>& constants() const { return constants_; }
  std::optional<Node> constant(int sort, int i) const;
  bool is_constant(Node n) const;

  /// Every same-sort pair has its meet among the nodes (set by construction helpers and completion).
  bool meet_closed() const { return meet_closed_; }
  void set_meet_closed(bool v) { meet_closed_ = v; }

  // ---- effective operations (declared value, else the value forced by order and levels)
  bool is_successor(Node x) const { return sorts_.at(x) != kUnsorted && levels_.at(x).is_successor(); }
  std::optional<Node> meet(Node a, Node b) const;
  std::optional<Node> suc(Node x, Node y) const;
  std::optional<Node> pre(Node x) const;
  std::optional<Node> lim(Node x) const;
  std::optional<Node> g(Node x, int target_sort) const;

  // ---- structural insertion used by completion and the extension procedure
  /// Inserts the ancestor of y at `lvl` (none may exist yet). Needs meet_closed().
  Node insert_on_branch(Node y, const Ordinal& lvl, const std::string& id);
  /// Inserts a new maximal node above `parent` (or a new isolated node when parent < 0).
  Node insert_leaf(int sort, Node parent, const Ordinal& lvl, const std::string& id);
  /// Inserts a node at `lvl` below every node of `above` (which must be upward closed).
  Node insert_below_all(int sort, const std::vector<Node>& above, const Ordinal& lvl, const std::string& id);

  bool operator==(const Fragment& rhs) const;

 private:
  Node push_node(const std::string& id, int sort, const Ordinal& level);

  Shape shape_;
  Mode mode_ = Mode::base;
  int theta_bound_ = 0;
  bool meet_closed_ = false;
  std::vector<std::string> ids_;
  std::vector<int> sorts_;
  std::vector<Ordinal> levels_;
  std::map<std::string, Node> index_;
  std::vector<std::vector<Node>> by_sort_;
  std::vector<Bits> below_;
  std::map<std::pair<Node, Node>, Node> meet_;
  std::map<std::pair<Node, Node>, Node> suc_;
  std::map<Node, Node> pre_;
  std::map<Node, Node> lim_;
  std::map<std::pair<Node, int>, Node> g_;
  std::map<std::pair<int, int>, Node> constants_;
};

/// Input row for from_standard_tree.
struct TreeNodeSpec {
  std::string id;
  Ordinal level;
};

/// Builds a one-sort fragment from a tree given by levels and order edges (ids).
/// All forced lim, pre, suc and meet values are declared explicitly.
/// Throws InvalidTree when the order is not a tree or levels do not increase along it.
Fragment from_standard_tree(const std::vector<TreeNodeSpec>& nodes,
                            const std::vector<std::pair<std::string, std::string>>& edges,
                            const Shape& shape = Shape::single(), int sort = 0);

/// Checks every declared value against the axioms of the chosen mode.
std::vector<Violation> validate(const Fragment& f, Mode mode);
inline std::vector<Violation> validate(const Fragment& f) { return validate(f, f.mode()); }

struct CompleteOptions {
  /// Successor rank up to which suc/pre values are materialized.
  int rank = 0;
  /// Restrict the suc/pre rounds to the closure of these nodes (all nodes when empty).
  std::vector<Node> generators;
};

/// Smallest extension (under the fixed materialization policy) in which meet,
/// lim and the G maps are total and suc/pre are total on the rank-`rank`
/// closure of the generators. Throws CannotComplete on a policy conflict.
Fragment complete(const Fragment& f, const CompleteOptions& opts = {});

/// Number of successor steps from the lower to the upper node; nullopt means infinite.
/// Throws Incomparable (or SortError across sorts).
std::optional<std::uint64_t> distance(const Fragment& f, Node x, Node y);

}  // namespace twb
