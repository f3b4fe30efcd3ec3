#include "twb/shape.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "twb/error.hpp"

namespace twb {

std::vector<std::string> validate_shape(const ShapeSpec& spec) {
  std::vector<std::string> out;
  std::set<std::string> known;
  for (const auto& id : spec.ids) {
    if (!known.insert(id).second) out.push_back("duplicate index '" + id + "'");
  }
  for (const auto& [child, par] : spec.parent) {
    if (!known.count(child)) out.push_back("parent entry for unknown index '" + child + "'");
    if (!known.count(par)) out.push_back("unknown parent '" + par + "' of '" + child + "'");
  }
  if (spec.ids.empty()) return out;
  std::vector<std::string> roots;
  for (const auto& id : known) {
    if (!spec.parent.count(id)) roots.push_back(id);
  }
  if (roots.empty()) out.push_back("no root");
  if (roots.size() > 1) out.push_back("multiple roots");
  bool cycle = false;
  for (const auto& id : known) {
    std::set<std::string> seen{id};
    std::string cur = id;
    while (spec.parent.count(cur)) {
      cur = spec.parent.at(cur);
      if (!seen.insert(cur).second) {
        cycle = true;
        break;
      }
    }
  }
  if (cycle) out.push_back("cycle");
  return out;
}

int Shape::add(const std::string& id, int parent, const std::string& label) {
  const int i = size();
  ids_.push_back(id);
  labels_.push_back(label);
  parent_.push_back(parent);
  children_.emplace_back();
  if (parent >= 0) children_[parent].push_back(i);
  index_[id] = i;
  return i;
}

Shape Shape::build(const ShapeSpec& spec) {
  auto problems = validate_shape(spec);
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorKind::InvalidTree, msg);
  }
  Shape s;
  if (spec.ids.empty()) return s;
  // Insert parents before children, keeping the input order among siblings.
  std::map<std::string, std::vector<std::string>> kids;
  std::string root;
  for (const auto& id : spec.ids) {
    auto it = spec.parent.find(id);
    if (it == spec.parent.end())
      root = id;
    else
      kids[it->second].push_back(id);
  }
  auto label_of = [&](const std::string& id) {
    auto it = spec.labels.find(id);
    return it == spec.labels.end() ? std::string() : it->second;
  };
  std::vector<std::pair<std::string, int>> queue{{root, -1}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    auto [id, par] = queue[q];
    const int i = s.add(id, par, label_of(id));
    for (const auto& k : kids[id]) queue.emplace_back(k, i);
  }
  return s;
}

Shape Shape::single(const std::string& id) {
  Shape s;
  s.add(id, -1, "");
  return s;
}

Shape Shape::chain(int n) {
  Shape s;
  for (int i = 0; i < n; ++i) s.add(std::to_string(i), i - 1, std::to_string(i));
  return s;
}

Shape Shape::binary(int depth) {
  Shape s;
  s.add("<>", -1, "");
  for (std::size_t q = 0; q < s.ids_.size(); ++q) {
    const std::string lab = s.labels_[q];
    if (static_cast<int>(lab.size()) >= depth) continue;
    for (char b : {'0', '1'}) s.add("<" + lab + b + ">", static_cast<int>(q), lab + b);
  }
  return s;
}

std::optional<int> Shape::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Shape::index_of(const std::string& id) const {
  auto f = find(id);
  if (!f) throw Error(ErrorKind::UnknownIndex, "no shape index '" + id + "'");
  return *f;
}

bool Shape::is_ancestor_or_self(int a, int b) const {
  for (int cur = b; cur >= 0; cur = parent_[cur]) {
    if (cur == a) return true;
  }
  return false;
}

int Shape::r_of(int i) const {
  if (i < 0 || i >= size()) throw Error(ErrorKind::UnknownIndex, "shape index " + std::to_string(i));
  int r = 0;
  for (int cur = i; cur >= 0; cur = parent_[cur]) ++r;
  return r;
}

int Shape::longest_branch() const {
  int best = 0;
  for (int i = 0; i < size(); ++i) best = std::max(best, r_of(i));
  return best;
}

Shape Shape::subtree(int top) const {
  Shape s;
  std::map<int, int> renum;
  std::vector<int> queue{top};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int i = queue[q];
    renum[i] = s.add(ids_[i], i == top ? -1 : renum.at(parent_[i]), labels_[i]);
    for (int c : children_[i]) queue.push_back(c);
  }
  return s;
}

std::vector<std::vector<int>> Shape::component_indices() const {
  std::vector<std::vector<int>> out;
  if (empty()) return out;
  for (int c : children_[0]) {
    std::vector<int> comp{c};
    for (std::size_t q = 0; q < comp.size(); ++q) {
      for (int k : children_[comp[q]]) comp.push_back(k);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::pair<int, std::vector<Shape>> Shape::decompose() const {
  std::vector<Shape> comps;
  if (empty()) return {-1, comps};
  for (int c : children_[0]) comps.push_back(subtree(c));
  return {0, comps};
}

ShapeSpec Shape::spec() const {
  ShapeSpec sp;
  for (int i = 0; i < size(); ++i) {
    sp.ids.push_back(ids_[i]);
    if (parent_[i] >= 0) sp.parent[ids_[i]] = ids_[parent_[i]];
    if (!labels_[i].empty()) sp.labels[ids_[i]] = labels_[i];
  }
  return sp;
}

bool Shape::operator==(const Shape& rhs) const {
  return ids_ == rhs.ids_ && parent_ == rhs.parent_ && labels_ == rhs.labels_;
}

}  // namespace twb
