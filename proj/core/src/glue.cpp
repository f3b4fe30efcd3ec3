#include "twb/glue.hpp"

#include <algorithm>
#include <set>

#include "twb/error.hpp"
#include "twb/partition.hpp"

namespace twb {

namespace {

// Copies every node, order edge and declared value of src into out, sending
// source sort s to sort_map[s]. Returns the output node of each source node.
std::vector<Node> embed(Fragment& out, const Fragment& src, const std::vector<int>& sort_map) {
  auto sort_of = [&](int s) { return s == kUnsorted ? kUnsorted : sort_map.at(static_cast<std::size_t>(s)); };
  std::vector<Node> at(static_cast<std::size_t>(src.size()));
  for (Node x = 0; x < src.size(); ++x) at[x] = out.add_node(src.id(x), sort_of(src.sort(x)), src.level(x));
  for (const auto& [lo, hi] : src.covering_edges()) out.add_edge(at[lo], at[hi]);
  for (const auto& [k, v] : src.meet_table()) out.declare_meet(at[k.first], at[k.second], at[v]);
  for (const auto& [k, v] : src.suc_table()) out.declare_suc(at[k.first], at[k.second], at[v]);
  for (const auto& [k, v] : src.pre_table()) out.declare_pre(at[k], at[v]);
  for (const auto& [k, v] : src.lim_table()) out.declare_lim(at[k], at[v]);
  for (const auto& [k, v] : src.g_table()) out.declare_g(at[k.first], sort_of(k.second), at[v]);
  for (const auto& [k, v] : src.constants()) out.declare_constant(sort_of(k.first), k.second, at[v]);
  return at;
}

std::vector<int> base_sort_map(const Shape& S, const std::set<int>& inner, const Shape& bs) {
  std::vector<int> m;
  for (int s = 0; s < bs.size(); ++s) {
    const auto i = S.find(bs.id(s));
    if (!i || !inner.count(*i))
      throw Error(ErrorKind::InputError, "base sort '" + bs.id(s) + "' is not an inner index");
    const int bp = bs.parent(s);
    const int want = bp < 0 ? -1 : m.at(static_cast<std::size_t>(bp));
    if (S.parent(*i) != want)
      throw Error(ErrorKind::InputError, "base sort '" + bs.id(s) + "' has a different parent in the shape");
    m.push_back(*i);
  }
  return m;
}

std::vector<int> boundary_sort_map(const Shape& S, int slot, const Shape& bs) {
  std::vector<int> m(static_cast<std::size_t>(bs.size()), -1);
  if (bs.empty()) return m;
  m[0] = slot;
  for (int s = 1; s < bs.size(); ++s) {
    const int p = bs.parent(s);
    const auto& sibs = bs.children(p);
    const auto pos = static_cast<std::size_t>(std::find(sibs.begin(), sibs.end(), s) - sibs.begin());
    const auto& room = S.children(m[p]);
    if (pos >= room.size())
      throw Error(ErrorKind::InputError,
                  "boundary at '" + S.id(slot) + "' does not fit the shape below it (sort '" + bs.id(s) + "')");
    m[s] = room[pos];
  }
  return m;
}

}  // namespace

GlueResult star_construct(const GlueSpec& g) {
  const Shape& S = g.shape;
  std::set<int> inner;
  for (int i : g.inner) {
    if (i < 0 || i >= S.size()) throw Error(ErrorKind::UnknownIndex, "inner index " + std::to_string(i));
    inner.insert(i);
  }
  for (int i : inner) {
    if (S.parent(i) >= 0 && !inner.count(S.parent(i)))
      throw Error(ErrorKind::InputError, "inner set is not downward closed at '" + S.id(i) + "'");
  }
  std::set<int> slots;
  for (int i = 0; i < S.size(); ++i) {
    if (!inner.count(i) && S.parent(i) >= 0 && inner.count(S.parent(i))) slots.insert(i);
  }
  for (const auto& [slot, frag] : g.boundary) {
    if (!slots.count(slot))
      throw Error(ErrorKind::InputError, "boundary index " + std::to_string(slot) + " is not a slot");
  }

  std::set<std::string> seen;
  auto claim = [&](const Fragment& f, const std::string& part) {
    for (Node x = 0; x < f.size(); ++x) {
      if (!seen.insert(f.id(x)).second)
        throw Error(ErrorKind::DisjointnessViolated, "node id '" + f.id(x) + "' reused in " + part);
    }
  };
  claim(g.base, "the base");
  for (const auto& [slot, frag] : g.boundary) claim(frag, "the boundary at '" + S.id(slot) + "'");

  GlueResult r;
  r.model = Fragment(S);
  r.model.set_mode(Mode::theta);
  int bound = g.base.theta_bound();
  bool closed = g.base.meet_closed() || g.base.size() == 0;
  r.base_nodes = embed(r.model, g.base, base_sort_map(S, inner, g.base.shape()));
  for (const auto& [slot, frag] : g.boundary) {
    auto sorts = boundary_sort_map(S, slot, frag.shape());
    r.boundary_nodes[slot] = embed(r.model, frag, sorts);
    r.boundary_sorts[slot] = std::move(sorts);
    bound = std::max(bound, frag.theta_bound());
    closed = closed && (frag.meet_closed() || frag.size() == 0);
  }
  r.model.set_theta_bound(bound);
  r.model.set_meet_closed(closed);

  Fragment& m = r.model;
  for (const auto& [slot, table] : g.connectors) {
    if (!slots.count(slot))
      throw Error(ErrorKind::InputError, "connector index " + std::to_string(slot) + " is not a slot");
    for (const auto& [from, to] : table) {
      const Node x = m.node(from), v = m.node(to);
      if (x >= g.base.size()) throw Error(ErrorKind::InputError, "connector source '" + from + "' is not a base node");
      m.declare_g(x, slot, v);
    }
  }
  for (int slot : slots) {
    const int parent = S.parent(slot);
    const auto declared = g.connectors.find(slot);
    for (const auto& [key, c] : m.constants()) {
      if (key.first != parent) continue;
      const auto target = m.constant(slot, key.second);
      if (!target) continue;
      if (declared != g.connectors.end() && declared->second.count(m.id(c))) continue;
      m.declare_g(c, slot, *target);
    }
  }

  const auto violations = validate(m, Mode::theta);
  if (!violations.empty()) {
    std::string what;
    for (const auto& v : violations) what += (what.empty() ? "" : "; ") + v.name + " " + v.detail;
    throw Error(ErrorKind::AxiomViolated, what);
  }
  return r;
}

SortMask boundary_mask(const GlueResult& r, int slot) {
  SortMask mask(static_cast<std::size_t>(r.model.shape().size()), false);
  for (int s : r.boundary_sorts.at(slot)) mask[static_cast<std::size_t>(s)] = true;
  return mask;
}

bool transfer_agrees(const GlueResult& r, int slot, const Fragment& source, const std::vector<Node>& a,
                     const std::vector<Node>& b, int k) {
  const auto& at = r.boundary_nodes.at(slot);
  auto image = [&](const std::vector<Node>& t) {
    std::vector<Node> out;
    for (Node x : t) out.push_back(at.at(static_cast<std::size_t>(x)));
    return out;
  };
  const auto mask = boundary_mask(r, slot);
  const bool before = tp_code(source, a, {}, k) == tp_code(source, b, {}, k);
  const bool after = tp_code(r.model, image(a), {}, k, mask) == tp_code(r.model, image(b), {}, k, mask);
  return before == after;
}

const char* witness_case_name(WitnessCase c) {
  switch (c) {
    case WitnessCase::theta: return "theta";
    case WitnessCase::singular: return "singular";
    case WitnessCase::regular: return "regular";
    case WitnessCase::inaccessible: return "inaccessible";
  }
  return "?";
}

WitnessCase parse_witness_case(const std::string& s) {
  if (s == "theta" || s == "case1") return WitnessCase::theta;
  if (s == "singular" || s == "case2") return WitnessCase::singular;
  if (s == "regular" || s == "case3") return WitnessCase::regular;
  if (s == "inaccessible" || s == "inacc") return WitnessCase::inaccessible;
  throw Error(ErrorKind::InputError, "unknown witness case '" + s + "'");
}

namespace {

Ordinal omega_times_plus(std::uint64_t k, std::uint64_t n) {
  return k == 0 ? Ordinal::nat(n) : Ordinal::omega_power(1, k).plus_nat(n);
}

// Number of the limb an ordinal below w^2 sits in.
std::uint64_t limb_index(const Ordinal& o) {
  const auto& t = o.terms();
  return (!t.empty() && t[0].exponent == 1) ? t[0].coefficient : 0;
}

// A root with `size` children at level 1; the children are the constants
// unless `bare`. Ids carry the prefix.
Fragment constants_model(int size, const std::string& prefix, bool bare) {
  std::vector<TreeNodeSpec> nodes{{prefix + "m", Ordinal()}};
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < size; ++i) {
    nodes.push_back({prefix + "c" + std::to_string(i), Ordinal::nat(1)});
    edges.push_back({prefix + "m", nodes.back().id});
  }
  Fragment f = from_standard_tree(nodes, edges, Shape::single("<>"));
  f.set_mode(Mode::theta);
  f.set_theta_bound(size);
  if (!bare) {
    for (int i = 0; i < size; ++i) f.declare_constant(0, i, f.node(prefix + "c" + std::to_string(i)));
  }
  return f;
}

std::string constant_id(const std::string& prefix, std::uint64_t i) { return prefix + "c" + std::to_string(i); }

void need(int have, std::uint64_t want, const std::string& what) {
  if (static_cast<std::uint64_t>(have) < want)
    throw Error(ErrorKind::InsufficientSubwitness,
                what + " needs " + std::to_string(want) + " elements, the sub-witness has " + std::to_string(have));
}

// Base fragment from a tree spec, completed so that rank-1 closures exist, in theta mode.
Fragment tree_base(const std::vector<TreeNodeSpec>& nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
  Fragment f = complete(from_standard_tree(nodes, edges, Shape::single("<>")), {.rank = 1, .generators = {}});
  f.set_mode(Mode::theta);
  return f;
}

// Glues a one-sort base under binary(1) with the two sub-witnesses, sending each
// successor x of the base to rule0(x) and rule1(x) (constant numbers).
template <class Rule0, class Rule1>
Fragment glue_two(const Fragment& base, const Fragment& sub0, const Fragment& sub1, Rule0 rule0, Rule1 rule1) {
  GlueSpec g;
  g.shape = Shape::binary(1);
  g.inner = {g.shape.index_of("<>")};
  const int s0 = g.shape.index_of("<0>"), s1 = g.shape.index_of("<1>");
  g.base = base;
  g.boundary[s0] = sub0;
  g.boundary[s1] = sub1;
  for (Node x = 0; x < base.size(); ++x) {
    if (!base.is_successor(x)) continue;
    g.connectors[s0][base.id(x)] = constant_id("a.", rule0(x));
    g.connectors[s1][base.id(x)] = constant_id("b.", rule1(x));
  }
  return star_construct(g).model;
}

WitnessModel theta_case(const WitnessParams& p) {
  WitnessModel w;
  w.model = constants_model(p.theta_bound, "", p.control);
  for (int i = 0; i < p.theta_bound; ++i) w.A.push_back(w.model.node(constant_id("", static_cast<std::uint64_t>(i))));
  return w;
}

WitnessModel singular_case(const WitnessParams& p) {
  const auto& ends = p.block_ends;
  if (ends.empty() || ends.front() <= 0 || !std::is_sorted(ends.begin(), ends.end()) ||
      std::adjacent_find(ends.begin(), ends.end()) != ends.end())
    throw Error(ErrorKind::InputError, "block ends must be positive and strictly increasing");
  const auto blocks = ends.size();
  const auto limbs = static_cast<std::uint64_t>(ends.back());
  need(p.theta_bound, blocks, "the block connector");
  need(p.theta_bound, limbs, "the limb connector");

  std::vector<TreeNodeSpec> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::uint64_t t = 0; t < limbs; ++t) {
    for (std::uint64_t n = 0; n < 3; ++n) {
      nodes.push_back({"k" + std::to_string(t) + "+" + std::to_string(n), omega_times_plus(t, n)});
      if (nodes.size() > 1) edges.push_back({nodes[nodes.size() - 2].id, nodes.back().id});
    }
  }
  const Fragment base = tree_base(nodes, edges);
  auto block = [&](Node x) -> std::uint64_t {
    if (p.control) return 0;
    const auto t = limb_index(base.level(x));
    return static_cast<std::uint64_t>(std::upper_bound(ends.begin(), ends.end(), static_cast<int>(t)) - ends.begin());
  };
  auto limb = [&](Node x) -> std::uint64_t { return p.control ? 0 : limb_index(base.level(x)); };

  WitnessModel w;
  w.model = glue_two(base, constants_model(p.theta_bound, "a.", false), constants_model(p.theta_bound, "b.", false),
                     block, limb);
  for (const auto& n : nodes) w.A.push_back(w.model.node(n.id));
  return w;
}

WitnessModel regular_case(const WitnessParams& p) {
  if (p.binary_depth < 1) throw Error(ErrorKind::InputError, "binary depth must be at least 1");
  auto level_at = [](int i) { return omega_times_plus(static_cast<std::uint64_t>(i / 2), static_cast<std::uint64_t>(i % 2)); };
  std::vector<TreeNodeSpec> nodes{{"f", Ordinal()}};
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> layer{"f"};
  for (int i = 1; i <= p.binary_depth + 1; ++i) {
    std::vector<std::string> next;
    for (const auto& s : layer) {
      for (const char* c : i <= p.binary_depth ? std::vector<const char*>{"0", "1"} : std::vector<const char*>{"+"}) {
        next.push_back(s + c);
        nodes.push_back({next.back(), level_at(i)});
        edges.push_back({s, next.back()});
      }
    }
    layer = std::move(next);
  }
  const Fragment base = tree_base(nodes, edges);
  std::uint64_t limbs = 0;
  for (Node x = 0; x < base.size(); ++x) {
    if (base.is_successor(x)) limbs = std::max(limbs, limb_index(base.level(x)) + 1);
  }
  need(p.theta_bound, limbs, "the limb connector");
  auto limb = [&](Node x) -> std::uint64_t { return p.control ? 0 : limb_index(base.level(x)); };

  WitnessModel w;
  w.model = glue_two(base, constants_model(p.theta_bound, "a.", false), constants_model(p.theta_bound, "b.", false),
                     limb, limb);
  for (const auto& n : nodes) w.A.push_back(w.model.node(n.id));
  return w;
}

// First pair coloring of the chain's Suc_lim positions (singletons colored 0)
// that is hard for the given length, in the order of the bit mask over pairs.
PTriple hard_chain(int limbs, int delta) {
  std::vector<Ordinal> levels;
  for (int i = 0; i < limbs; ++i) {
    levels.push_back(omega_times_plus(static_cast<std::uint64_t>(i), 0));
    levels.push_back(omega_times_plus(static_cast<std::uint64_t>(i), 1));
  }
  std::vector<std::vector<int>> pairs;
  for (int i = 0; i < limbs; ++i) {
    for (int j = i + 1; j < limbs; ++j) pairs.push_back({2 * i + 1, 2 * j + 1});
  }
  if (pairs.size() > 24) throw Error(ErrorKind::BudgetExceeded, "too many limbs for the coloring search");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Coloring c;
    c.N = 2 * limbs;
    c.arity = 2;
    for (std::size_t i = 0; i < pairs.size(); ++i) c.table[pairs[i]] = (mask >> i) & 1u;
    PTriple p = p_from_coloring(c, levels);
    if (is_hard(p, delta)) return p;
  }
  throw Error(ErrorKind::InputError, "no two-coloring of " + std::to_string(limbs) + " limbs avoids length " +
                                         std::to_string(delta));
}

// Connector targets: each E-class inside each neighbourhood class of the
// Suc_lim nodes gets its own constant number, counted per neighbourhood.
std::map<Node, std::uint64_t> class_targets(const Fragment& f, const std::vector<int>& e_class) {
  std::map<Node, std::uint64_t> out;
  std::vector<std::pair<Node, std::map<int, std::uint64_t>>> hoods;
  for (Node x : suc_lim_nodes(f)) {
    auto it = std::find_if(hoods.begin(), hoods.end(), [&](const auto& h) { return neighbours(f, h.first, x); });
    if (it == hoods.end()) {
      hoods.push_back({x, {}});
      it = std::prev(hoods.end());
    }
    auto& classes = it->second;
    const auto [pos, fresh] = classes.emplace(e_class.at(static_cast<std::size_t>(x)), classes.size());
    out[x] = pos->second;
  }
  return out;
}

// The Suc_lim node that a successor's G value is read from: its ancestor-or-self one above its limb.
Node limb_head(const Fragment& f, Node x) {
  const auto a = f.ancestor_at(x, f.level(x).limb_level().successor());
  if (!a) throw Error(ErrorKind::NotClosed, "no node above the limb of '" + f.id(x) + "'");
  return *a;
}

WitnessModel inaccessible_case(const WitnessParams& p) {
  if (p.limbs < 1 || p.delta < 2) throw Error(ErrorKind::InputError, "need at least one limb and delta >= 2");
  const PTriple p0 = hard_chain(p.limbs, p.delta);
  const Fragment bottom = complete(p0.tree, {.rank = 1, .generators = {}});

  std::map<Node, QNode> lifts;
  int longest = 0;
  for (Node x : suc_lim_nodes(p0.tree)) {
    lifts[x] = lift_element(p0, x);
    longest = std::max(longest, lifts[x].length());
  }
  Color colors = 1;
  for (const auto& [t, c] : p0.d) colors = std::max(colors, c + 1);
  const QFragment q1 = q_enumerate(p0, longest, colors);
  const Fragment& top = q1.triple.tree;
  std::map<QNode, Node> qnode_at;
  for (Node v = 0; v < top.size(); ++v) qnode_at[q1.nodes[v]] = v;

  ShapeSpec spec;
  spec.ids = {"<>", "<0>", "<1>", "<01>"};
  spec.parent = {{"<0>", "<>"}, {"<1>", "<>"}, {"<01>", "<0>"}};
  const Shape S = Shape::build(spec);
  ShapeSpec spine_spec;
  spine_spec.ids = {"<>", "<0>"};
  spine_spec.parent = {{"<0>", "<>"}};

  // Spine: the chain in the first sort, the Q fragment in the second, G sending
  // each successor to the lift of its limb head.
  Fragment spine(Shape::build(spine_spec));
  spine.set_mode(Mode::theta);
  const auto at_bottom = embed(spine, bottom, {0});
  const auto at_top = embed(spine, top, {1});
  spine.set_meet_closed(bottom.meet_closed() && top.meet_closed());
  Node collapsed = -1;
  for (Node v = 0; v < top.size(); ++v) {
    if (top.level(v) == Ordinal::nat(1)) {
      collapsed = v;
      break;
    }
  }
  for (Node x = 0; x < bottom.size(); ++x) {
    if (!bottom.is_successor(x)) continue;
    const Node head = p0.tree.node(bottom.id(limb_head(bottom, x)));
    Node target = collapsed;
    if (!p.control) {
      const auto it = qnode_at.find(lifts.at(head));
      if (it == qnode_at.end())
        throw Error(ErrorKind::CannotComplete, "lift of '" + p0.tree.id(head) + "' is not in the Q fragment");
      target = it->second;
    }
    if (target < 0) throw Error(ErrorKind::CannotComplete, "the Q fragment has no level-1 node");
    spine.declare_g(at_bottom[x], 1, at_top[target]);
  }

  GlueSpec g;
  g.shape = S;
  g.inner = {S.index_of("<>"), S.index_of("<0>")};
  g.base = spine;
  const int side0 = S.index_of("<1>"), side1 = S.index_of("<01>");
  g.boundary[side0] = constants_model(p.sub_witness, "n0.", false);
  g.boundary[side1] = constants_model(p.sub_witness, "n1.", false);
  auto side = [&](int slot, const std::string& prefix, const Fragment& f, const std::vector<int>& e_class) {
    const auto targets = class_targets(f, e_class);
    for (const auto& [x, i] : targets) need(p.sub_witness, i + 1, "the class connector at '" + S.id(slot) + "'");
    for (Node x = 0; x < f.size(); ++x) {
      if (!f.is_successor(x)) continue;
      const Node head = limb_head(f, x);
      const auto it = targets.find(head);
      if (it == targets.end()) throw Error(ErrorKind::CannotComplete, "'" + f.id(head) + "' is not Suc_lim");
      g.connectors[slot][f.id(x)] = constant_id(prefix, p.control ? 0 : it->second);
    }
  };
  std::vector<int> bottom_classes = p0.e_class;
  for (Node x = p0.tree.size(); x < bottom.size(); ++x) bottom_classes.push_back(x);
  side(side0, "n0.", bottom, bottom_classes);
  side(side1, "n1.", top, q1.triple.e_class);

  WitnessModel w;
  w.model = star_construct(g).model;
  for (Node x : suc_lim_nodes(p0.tree)) w.A.push_back(w.model.node(p0.tree.id(x)));
  return w;
}

}  // namespace

WitnessModel build_witness(WitnessCase c, const WitnessParams& p) {
  switch (c) {
    case WitnessCase::theta: return theta_case(p);
    case WitnessCase::singular: return singular_case(p);
    case WitnessCase::regular: return regular_case(p);
    case WitnessCase::inaccessible: return inaccessible_case(p);
  }
  throw Error(ErrorKind::InputError, "unknown witness case");
}

}  // namespace twb
