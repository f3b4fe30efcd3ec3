#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twb/closure.hpp"
#include "twb/fragment.hpp"

namespace twb {

/// Canonical byte encoding of the labeled closure of a tuple over parameters.
using TypeCode = std::string;

/// Code of tp_k(tuple / A). Equal codes iff the tuples are k-equivalent over A.
TypeCode tp_code(const Fragment& f, const std::vector<Node>& tuple, const std::vector<Node>& A, int k,
                 const SortMask& mask = {});

/// Generator-respecting isomorphism between rank-k closures, as (source, target) pairs sorted by source.
using Witness = std::vector<std::pair<Node, Node>>;

/// Searches for the isomorphism of the tree language without suc/pre between
/// cl^(k)(a) in fA and cl^(k)(b) in fB sending a_i to b_i and constants to
/// constants. Independent of the type-code machinery: plain backtracking.
std::optional<Witness> equiv_k(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB,
                               const std::vector<Node>& b, int k, const SortMask& mask = {});

/// Same search, counting witnesses up to `limit`.
int count_isomorphisms(const Fragment& fA, const std::vector<Node>& a, const Fragment& fB,
                       const std::vector<Node>& b, int k, int limit, const SortMask& mask = {});

/// Equivalence over a parameter set inside one fragment.
std::optional<Witness> equiv_over(const Fragment& f, const std::vector<Node>& a, const std::vector<Node>& b,
                                  const std::vector<Node>& A, int k);

/// Number of distinct codes over all n-tuples from `domain` (all nodes when empty).
/// Throws BudgetExceeded when more than `budget` tuples would be coded.
std::uint64_t count_type_classes(const Fragment& f, const std::vector<Node>& A, int k, int n,
                                 std::uint64_t budget = 2'000'000, const std::vector<Node>& domain = {});

/// Answers of the one-sort question list for a node over a parameter set.
struct Questionnaire {
  std::vector<std::int64_t> answers;
  std::string str() const;
  bool operator==(const Questionnaire&) const = default;
};

/// Throws WrongShape unless the fragment has exactly one sort.
Questionnaire questionnaire_code(const Fragment& f, Node a, const std::vector<Node>& A, int k);

/// Polynomial degree read off a (|A|, count) series; see the implementation for the rule.
/// Throws BadSeries on fewer than 4 points, non-increasing sizes, or decreasing counts.
int estimate_degree(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& series);

}  // namespace twb
