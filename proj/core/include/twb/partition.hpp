#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twb/fragment.hpp"

namespace twb {

using Color = std::uint64_t;

/// Coloring of increasing index tuples over [0, N) up to a length bound.
/// Tuples missing from the table take the default color.
struct Coloring {
  int N = 0;
  int arity = 2;
  Color default_color = 0;
  std::map<std::vector<int>, Color> table;

  Color operator()(const std::vector<int>& tuple) const;
  bool operator==(const Coloring&) const = default;
};

struct Homogeneous {
  std::vector<int> indices;
  std::vector<Color> colors;  ///< colors[n-1] is the color of every n-tuple
};

/// Lexicographically least index sequence of length delta on which the color
/// depends only on the tuple length. Throws InputError when delta > N or the
/// arity is below 2, BudgetExceeded after `budget` search steps.
std::optional<Homogeneous> find_homogeneous(const Coloring& c, int delta, std::uint64_t budget = 50'000'000);

/// Colors tuples of the sequence's positions: odd lengths get 0, a tuple of
/// length 2m (m <= half_arity) gets 0 when its halves have the same rank-k
/// type and otherwise 1 + the index of the least literal that holds on the
/// first half and fails on the second, among all literals used in this call.
Coloring coloring_from_sequence(const Fragment& f, const std::vector<Node>& seq, int k, int half_arity);

/// Least literal (as a string over x0.., by string order) true of a and false of b,
/// or nullopt when the tuples have the same rank-k type.
std::optional<std::string> separating_literal(const Fragment& f, const std::vector<Node>& a,
                                              const std::vector<Node>& b, int k);

std::uint64_t pair(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t x);

/// A single-sort tree with a coloring d of its increasing Suc_lim tuples (up to
/// `arity` long) and an equivalence E given by class labels.
struct PTriple {
  Fragment tree;
  int arity = 2;
  std::map<std::vector<Node>, Color> d;
  std::vector<int> e_class;  ///< per node
  /// The base coloring on levels used by the Q operator, with the level of each position.
  Coloring source;
  std::vector<Ordinal> source_levels;
};

bool is_suc_lim(const Fragment& f, Node x);
std::vector<Node> suc_lim_nodes(const Fragment& f);
bool neighbours(const Fragment& f, Node a, Node b);

std::vector<Violation> validate_ptriple(const PTriple& p);

/// Number of E classes inside each neighbour class (keyed by a member of the class).
std::map<Node, int> e_classes_per_neighbourhood(const PTriple& p);

/// An increasing Suc_lim sequence of length delta whose d is constant per tuple length.
std::optional<std::vector<Node>> find_clause5_sequence(const PTriple& p, int delta, std::uint64_t budget = 50'000'000);
inline bool is_hard(const PTriple& p, int delta) { return !find_clause5_sequence(p, delta).has_value(); }

/// The chain with the given levels (ids "p0", "p1", ...), d = c on Suc_lim positions, E = equality.
PTriple p_from_coloring(const Coloring& c, const std::vector<Ordinal>& levels);

/// Equations d(a..., x) = color over an ordered node set, keyed by the increasing tuple a.
struct DType {
  std::map<std::vector<Node>, Color> eq;
  bool operator==(const DType&) const = default;
  bool operator<(const DType& o) const { return eq < o.eq; }
};

/// All increasing tuples of A (A sorted by the tree order), the empty one first,
/// no longer than arity - 1.
std::vector<std::vector<Node>> dtype_tuples(const PTriple& p, const std::vector<Node>& A);
DType dtp(const PTriple& p, Node t, const std::vector<Node>& A);
bool satisfies(const PTriple& p, Node t, const DType& q);
DType restrict_type(const DType& q, const std::vector<Node>& B);
bool is_complete_over(const PTriple& p, const DType& q, const std::vector<Node>& A);
std::vector<DType> enumerate_complete_dtypes(const PTriple& p, const std::vector<Node>& A, Color colors,
                                             std::uint64_t budget = 1'000'000);

/// A node of the Q operator's tree: a strictly increasing Suc_lim sequence of
/// the base and types at its limit positions. Positions are finite, so only
/// position 0 is a limit.
struct QNode {
  std::vector<Node> eta;
  std::map<int, DType> gamma;
  int length() const { return static_cast<int>(eta.size()); }
  bool operator==(const QNode&) const = default;
  bool operator<(const QNode& o) const { return std::tie(eta, gamma) < std::tie(o.eta, o.gamma); }
};

std::string qnode_id(const PTriple& p, const QNode& a);

/// Names each violated membership clause ("clause 1" ... "clause 7").
std::vector<std::string> qnode_violations(const PTriple& p, const QNode& a);

struct QFragment {
  PTriple triple;             ///< the new triple over the emitted nodes
  std::vector<QNode> nodes;   ///< indexed like triple.tree
};

/// Every QNode of length at most alpha_max with types over `colors` colors.
QFragment q_enumerate(const PTriple& p, int alpha_max, Color colors, std::uint64_t budget = 1'000'000);

/// Greedy lift of a Suc_lim node t: a QNode whose last entry is t.
QNode lift_element(const PTriple& p, Node t);

struct KeyClaimReport {
  int lifted_windows = 0;      ///< increasing Suc_lim windows of the base whose lifts were emitted
  int qualifying = 0;          ///< of those, windows with l(v_i) = u_i for every link
  int branch_windows = 0;      ///< emitted nodes of length >= 2, read as the window of their labels
  int constant_failures = 0;
  int equation_failures = 0;
  int fan_windows = 0;
  int fan_failures = 0;
  bool ok() const { return constant_failures == 0 && equation_failures == 0 && fan_failures == 0; }
};

/// Checks the key-claim equations on every branch of the emitted fragment and
/// neighbour separation on its fans (see the implementation for the windows used).
KeyClaimReport key_claim_check(const PTriple& base, const QFragment& q);

}  // namespace twb
