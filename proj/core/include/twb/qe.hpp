#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "twb/fragment.hpp"
#include "twb/term.hpp"
#include "twb/types.hpp"

namespace twb {

/// Bound on the number of new successor elements one added point creates
/// (four around the point itself plus four around its meet point).
inline constexpr std::uint64_t kNewElementBound = 8;

/// Default ceiling for m2 values; larger results throw BudgetExceeded.
inline constexpr std::uint64_t kM2Cap = std::uint64_t{1} << 40;

/// Rank needed on the parameters so that one new point can be matched at rank m1.
/// Recursion: m2(m1,0,S) = m2(m1,k,empty) = m1; m2(m1,k+1,S) = m2(m2(m1,k,S),1,S);
/// m2(m1,1,S) = max over components S_i above the root of 2*m2(m1,K,S_i), plus 2*m1+1.
std::uint64_t m2(std::uint64_t m1, std::uint64_t k, const Shape& shape, std::uint64_t cap = kM2Cap);

/// Result of the one-point extension.
struct Extension {
  Fragment fragment;            ///< fB plus the new nodes
  Node d = -1;                  ///< the matched point, a node of `fragment`
  std::string route;            ///< which case of the construction applied
  std::vector<Node> new_nodes;  ///< nodes of `fragment` not in fB, in creation order
  std::uint64_t rank_used = 0;  ///< m2 at which the parameters were compared
};

/// Given c in fA and parameters a (in fA) and b (in fB) that agree at rank
/// m2(m1,1,shape), builds an extension of fB with a point d such that
/// c·a and d·b agree at rank m1. Both fragments must be closed enough for
/// the rank-m2 closures of a and b (and the rank-m1 closure of c·a).
/// Throws RankTooLow (naming the rank) when a and b do not agree, and
/// CannotComplete when the new part cannot be placed inside fB.
Extension extend_one_point(const Fragment& fA, const std::vector<Node>& a, Node c, const Fragment& fB,
                           const std::vector<Node>& b, int m1);

/// Quantifier-free description of an existential formula relative to a corpus:
/// the rank-m configurations of x-tuples, split by whether a witness y exists.
struct QECandidate {
  int rank = 0;
  int arity = 0;                  ///< number of x variables
  std::set<TypeCode> positive;    ///< configurations with a witness
  std::set<TypeCode> negative;    ///< configurations without one
  std::set<TypeCode> conflicting; ///< seen both ways (would refute the rank)
  /// Value of the candidate on a tuple: its configuration is positive.
  bool holds(const Fragment& f, const std::vector<Node>& x) const;
};

/// `phi` has the witness as variable 0 and x_i as variable i+1; `domain_sizes`
/// optionally limits the x-tuples to the first n nodes of each fragment.
/// Witnesses are searched among the nodes of the fragment and in the
/// one-point extensions that add a single node next to an existing one.
QECandidate qe_candidate(const Formula& phi, int witness_sort, const std::vector<Fragment>& corpus, int m,
                         std::uint64_t budget = 5'000'000);

}  // namespace twb
