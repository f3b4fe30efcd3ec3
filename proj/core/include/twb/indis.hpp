#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twb/fragment.hpp"
#include "twb/term.hpp"

namespace twb {

/// A finite sequence of nodes together with the rank, arity and gap used to
/// judge it. All entries must share one sort.
struct Window {
  std::vector<Node> seq;
  int rank = 1;
  int arity = 2;
  int gap = 1;
};

/// Same rank-k type for all increasing index tuples of each length up to the arity.
bool is_indiscernible(const Fragment& f, const Window& w);

/// Gap-n subsequences share one type family, and consecutive blocks of each
/// length below the arity have a position-independent type.
bool is_NI(const Fragment& f, const Window& w);

/// The window's images under x0^x1, suc(lim(x0^x1),x1) and, when the sort has a
/// child, G of the latter.
std::vector<Term> default_hni_terms(const Fragment& f, int sort);

/// is_NI for every derived sequence t_i = term(s_i, ..., s_{i+m-1}); false when a
/// term is undefined somewhere on the window.
bool is_HNI(const Fragment& f, const Window& w, const std::vector<Term>& terms);

enum class Pattern { Fan, AlmostIncreasing, Neither };
const char* pattern_name(Pattern p);

struct Classification {
  Pattern pattern = Pattern::Neither;
  std::optional<Node> fan_meet;      ///< common meet for Fan
  std::vector<Node> meet_chain;      ///< s_i ^ s_{i+1} for AlmostIncreasing
};

Classification classify(const Fragment& f, const std::vector<Node>& seq);

/// t_i = G(suc(lim(s_i ^ s_{i+1}), s_{i+1})) into the sort's unique child.
/// Throws NotAlmostIncreasing, ShapeExhausted (no child sort), WrongShape (two or
/// more children) or NotClosed (a needed value is missing).
std::vector<Node> h_map(const Fragment& f, const std::vector<Node>& seq);

struct HStep {
  std::vector<Node> seq;
  Classification classification;
  Ordinal first_level;
};

struct HTrace {
  std::vector<HStep> steps;
  std::string stop;  ///< "fan", "shape exhausted" or "iteration limit"
};

HTrace h_iterate(const Fragment& f, const std::vector<Node>& seq, int max_iter);

/// Calls visit on every non-constant sequence of length L over A (taken in id
/// order) that is indiscernible at (k, r); stops early when visit returns false.
/// Throws BudgetExceeded after `budget` search nodes.
void for_each_indiscernible(const Fragment& f, const std::vector<Node>& A, int L, int k, int r,
                            const std::function<bool(const std::vector<Node>&)>& visit,
                            std::uint64_t budget = 20'000'000);

/// The lexicographically least (by node id) such sequence.
std::optional<Window> search_indiscernible(const Fragment& f, const std::vector<Node>& A, int L, int k, int r,
                                           std::uint64_t budget = 20'000'000);

}  // namespace twb
