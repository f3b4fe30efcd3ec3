#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twb {

/// Raw, possibly malformed description of an index tree (as read from a file).
struct ShapeSpec {
  std::vector<std::string> ids;
  std::map<std::string, std::string> parent;  ///< child id -> parent id; roots are absent
  std::map<std::string, std::string> labels;
};

/// Names each broken shape invariant; empty when the ShapeSpec describes a valid tree.
/// The empty shape (no indices) is accepted.
std::vector<std::string> validate_shape(const ShapeSpec& spec);

/// Finite rooted index tree naming the sorts of a fragment.
///
/// Indices are dense integers in insertion order; ids and labels are the
/// external names. Parents always precede their children.
class Shape {
 public:
  Shape() = default;
  /// Throws InvalidTree (with the validate_shape messages) on a malformed spec.
  static Shape build(const ShapeSpec& spec);
  static Shape single(const std::string& id = "r");
  /// Indices 0..n-1, each the parent of the next; ids are "0".."n-1".
  static Shape chain(int n);
  /// All binary strings of length <= depth; ids are "<...>" around the label.
  static Shape binary(int depth);

  int size() const { return static_cast<int>(ids_.size()); }
  bool empty() const { return ids_.empty(); }
  int root() const { return ids_.empty() ? -1 : 0; }
  int parent(int i) const { return parent_.at(i); }
  const std::vector<int>& children(int i) const { return children_.at(i); }
  const std::string& id(int i) const { return ids_.at(i); }
  const std::string& label(int i) const { return labels_.at(i); }
  std::optional<int> find(const std::string& id) const;
  /// Throws UnknownIndex.
  int index_of(const std::string& id) const;
  bool is_child(int parent, int child) const { return parent_.at(child) == parent && parent >= 0; }
  bool is_ancestor_or_self(int a, int b) const;

  /// Number of indices at or below i on its branch (root gives 1). Throws UnknownIndex.
  int r_of(int i) const;
  int longest_branch() const;

  /// Root and the subtrees hanging from its children, in child order.
  std::pair<int, std::vector<Shape>> decompose() const;
  /// Index sets (in this shape's numbering) of the components above the root.
  std::vector<std::vector<int>> component_indices() const;
  /// The subtree rooted at i, as its own shape.
  Shape subtree(int i) const;

  ShapeSpec spec() const;
  bool operator==(const Shape& rhs) const;

 private:
  int add(const std::string& id, int parent, const std::string& label);

  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::map<std::string, int> index_;
};

}  // namespace twb
