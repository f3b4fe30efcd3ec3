#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twb/fragment.hpp"

namespace twb {

/// Term of the tree language over variables x_i and constants c_{sort,i}.
///
/// Every variable carries its sort; operator nodes carry the sort they act
/// in (for G: `sort` is the source index and `target` the child index).
struct Term {
  enum class Op { var, constant, meet, suc, pre, lim, g };

  Op op = Op::var;
  int sort = 0;
  int target = -1;
  int index = 0;  ///< variable number or constant number
  std::vector<Term> args;

  static Term var(int i, int sort);
  static Term constant(int sort, int i);
  static Term meet(Term a, Term b);
  static Term suc(Term a, Term b);
  static Term pre(Term a);
  static Term lim(Term a);
  static Term g(Term a, int target);

  /// Sort of the value (for G the target index). Throws SortError when ill-sorted.
  int value_sort() const;
  std::string str(const Shape* shape = nullptr) const;
  bool operator==(const Term&) const = default;
};

/// Successor rank: suc and pre add one to the maximal argument rank; meet, lim and G do not.
/// Throws SortError on an ill-sorted term.
int r_suc(const Term& t);

/// Additionally checks operator indices against the shape (G only along child edges).
void check_sorts(const Term& t, const Shape& shape);

/// Value of t under the assignment x_i -> assignment[i]; nullopt when some
/// operation is outside its domain or not available in the fragment.
/// Throws SortError when an assigned node has the wrong sort.
std::optional<Node> eval_term(const Fragment& f, const Term& t, const std::vector<Node>& assignment);

/// Quantifier-free formula over terms. Atoms with an undefined term are false.
struct Formula {
  enum class Kind { truth, eq, less, in_sort, negation, conjunction, disjunction };
  Kind kind = Kind::truth;
  Term lhs;
  Term rhs;
  int sort = 0;  ///< for in_sort
  std::vector<Formula> args;

  static Formula truth();
  static Formula eq(Term a, Term b);
  static Formula less(Term a, Term b);
  static Formula in_sort(Term a, int sort);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);

  std::string str(const Shape* shape = nullptr) const;
  bool operator==(const Formula&) const = default;
};

/// Largest successor rank of a term in the formula.
int r_suc(const Formula& phi);

/// Number of variables used (one more than the largest index).
int variable_count(const Formula& phi);

/// Truth value under the assignment. Throws SortError like eval_term.
bool holds(const Fragment& f, const Formula& phi, const std::vector<Node>& assignment);

}  // namespace twb
