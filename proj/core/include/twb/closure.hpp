#pragma once

#include <optional>
#include <vector>

#include "twb/fragment.hpp"

namespace twb {

enum class ClosureVariant { wedge, G, lim, suc, zero, one, k };

/// Which shape indices take part in a closure; empty means every index.
using SortMask = std::vector<bool>;

/// Runs the closure operators over a list in a fixed discovery order.
///
/// The order depends only on the positions of already discovered elements,
/// so isomorphic inputs give position-wise corresponding lists. Subclasses
/// may override the `need_*` hooks to create missing values instead of
/// failing with NotClosed.
class ClosureEngine {
 public:
  ClosureEngine(const Fragment& f, SortMask mask = {});
  virtual ~ClosureEngine() = default;

  /// Single operators (`wedge`, `G`, `lim`, `suc`) act once on the seeds as given.
  /// `zero`, `one` and `k` add the declared constants to the seeds first.
  std::vector<Node> run(const std::vector<Node>& seeds, ClosureVariant variant, int k = 0);

  bool active(int sort) const { return sort != kUnsorted && (mask_.empty() || mask_[sort]); }

 protected:
  virtual Node need_meet(Node a, Node b);
  virtual Node need_lim(Node x);
  virtual Node need_g(Node x, int target);
  virtual Node need_suc(Node x, Node y);
  virtual Node need_pre(Node x);
  const Fragment& frag() const { return *f_; }
  void rebind(const Fragment& f) { f_ = &f; }

 private:
  bool add(Node n);
  bool step_wedge();
  bool step_lim();
  bool step_g();
  bool step_suc();
  void zero();

  const Fragment* f_;
  SortMask mask_;
  std::vector<Node> list_;
  std::vector<char> in_list_;
};

/// Closure list in discovery order (seeds first).
std::vector<Node> closure_list(const Fragment& f, const std::vector<Node>& seeds, ClosureVariant variant, int k = 0,
                               const SortMask& mask = {});

/// Closure as a sorted node set.
std::vector<Node> closure(const Fragment& f, const std::vector<Node>& A, ClosureVariant variant, int k = 0);

/// Seeds used for a tuple over a parameter set: the tuple, then A by id, then the constants.
std::vector<Node> type_seeds(const Fragment& f, const std::vector<Node>& tuple, const std::vector<Node>& A);

/// An upper bound on |closure(f, A, k)| as a function of |A| (a polynomial of degree 2^k).
std::uint64_t closure_size_bound(const Shape& shape, int num_constants, int n, int k);

}  // namespace twb
