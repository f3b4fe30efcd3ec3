#include "twb/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "twb/error.hpp"

namespace twb {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InputError, (where.empty() ? "document" : where) + ": " + what);
}

std::string at_key(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string at_index(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorKind::InputError, "line " + std::to_string(line) + ": " + e.what());
  }
}

const json* find(const json& obj, const std::string& where, const char* key) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const std::string& where, const char* key) {
  const json* v = find(obj, where, key);
  if (!v) fail(at_key(where, key), "missing");
  return *v;
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

Color color(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    fail(where, "expected a non-negative integer");
  return j.get<Color>();
}

Ordinal ordinal(const json& j, const std::string& where) {
  const std::string s = str(j, where);
  try {
    return Ordinal::parse(s);
  } catch (const Error& e) {
    fail(where, e.message());
  }
}

// Any library error raised while reading is re-labelled with the field.
template <class F>
auto located(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InputError || e.kind() == ErrorKind::InvalidTree || e.kind() == ErrorKind::UnknownIndex)
      fail(where, e.message());
    throw;
  }
}

json shape_json(const Shape& s) {
  const ShapeSpec spec = s.spec();
  json j;
  j["ids"] = spec.ids;
  j["parent"] = spec.parent;
  json labels = json::object();
  for (const auto& [id, l] : spec.labels) {
    if (!l.empty()) labels[id] = l;
  }
  j["labels"] = labels;
  return j;
}

Shape read_shape(const json& j, const std::string& where) {
  ShapeSpec spec;
  const json& ids = array(need(j, where, "ids"), at_key(where, "ids"));
  for (std::size_t i = 0; i < ids.size(); ++i) spec.ids.push_back(str(ids[i], at_index(at_key(where, "ids"), i)));
  if (const json* p = find(j, where, "parent")) {
    if (!p->is_object()) fail(at_key(where, "parent"), "expected an object");
    for (const auto& [c, par] : p->items()) spec.parent[c] = str(par, at_key(at_key(where, "parent"), c));
  }
  if (const json* l = find(j, where, "labels")) {
    if (!l->is_object()) fail(at_key(where, "labels"), "expected an object");
    for (const auto& [c, lab] : l->items()) spec.labels[c] = str(lab, at_key(at_key(where, "labels"), c));
  }
  return located(where, [&] { return Shape::build(spec); });
}

int sort_index(const Shape& s, const json& j, const std::string& where) {
  const std::string id = str(j, where);
  const auto i = s.find(id);
  if (!i) fail(where, "unknown sort '" + id + "'");
  return *i;
}

json fragment_json(const Fragment& f) {
  const Shape& s = f.shape();
  auto id = [&](Node n) -> const std::string& { return f.id(n); };
  json j;
  j["shape"] = shape_json(s);
  j["mode"] = mode_name(f.mode());
  j["theta_bound"] = f.theta_bound();
  j["meet_closed"] = f.meet_closed();
  json nodes = json::array();
  for (Node n : f.nodes_by_id()) {
    json e;
    e["id"] = id(n);
    if (f.sort(n) != kUnsorted) e["sort"] = s.id(f.sort(n));
    e["level"] = f.level(n).str();
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  json order = json::array();
  for (const auto& [lo, hi] : f.covering_edges()) order.push_back({id(lo), id(hi)});
  j["order"] = order;
  auto sorted = [](json a) {
    std::sort(a.begin(), a.end());
    return a;
  };
  json meet = json::array(), suc = json::array(), pre = json::array(), lim = json::array(), g = json::array(),
       constants = json::array();
  for (const auto& [k, v] : f.meet_table()) {
    auto [a, b] = std::minmax(id(k.first), id(k.second));
    meet.push_back({a, b, id(v)});
  }
  for (const auto& [k, v] : f.suc_table()) suc.push_back({id(k.first), id(k.second), id(v)});
  for (const auto& [k, v] : f.pre_table()) pre.push_back({id(k), id(v)});
  for (const auto& [k, v] : f.lim_table()) lim.push_back({id(k), id(v)});
  for (const auto& [k, v] : f.g_table()) g.push_back({id(k.first), s.id(k.second), id(v)});
  for (const auto& [k, v] : f.constants()) constants.push_back({s.id(k.first), k.second, id(v)});
  j["meet"] = sorted(meet);
  j["suc"] = sorted(suc);
  j["pre"] = sorted(pre);
  j["lim"] = sorted(lim);
  j["g"] = sorted(g);
  j["constants"] = sorted(constants);
  return j;
}

Fragment read_fragment(const json& j, const std::string& where) {
  const json* sj = find(j, where, "shape");
  Fragment f(sj ? read_shape(*sj, at_key(where, "shape")) : Shape::single());
  const Shape& s = f.shape();
  if (const json* m = find(j, where, "mode")) {
    const std::string w = at_key(where, "mode");
    f.set_mode(located(w, [&] { return parse_mode(str(*m, w)); }));
  }
  if (const json* b = find(j, where, "theta_bound")) f.set_theta_bound(static_cast<int>(integer(*b, at_key(where, "theta_bound"))));

  const std::string nw = at_key(where, "nodes");
  const json& nodes = array(need(j, where, "nodes"), nw);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string w = at_index(nw, i);
    const std::string id = str(need(nodes[i], w, "id"), at_key(w, "id"));
    const json* sort = find(nodes[i], w, "sort");
    const int si = sort ? sort_index(s, *sort, at_key(w, "sort")) : kUnsorted;
    const json* level = find(nodes[i], w, "level");
    const Ordinal lv = level ? ordinal(*level, at_key(w, "level")) : Ordinal();
    located(w, [&] { return f.add_node(id, si, lv); });
  }
  auto node = [&](const json& e, const std::string& w) {
    const std::string id = str(e, w);
    const auto n = f.find(id);
    if (!n) fail(w, "unknown node '" + id + "'");
    return *n;
  };
  // Reads rows of a fixed width from an optional table.
  auto rows = [&](const char* key, std::size_t width, auto&& each) {
    const json* t = find(j, where, key);
    if (!t) return;
    const std::string tw = at_key(where, key);
    array(*t, tw);
    for (std::size_t i = 0; i < t->size(); ++i) {
      const std::string w = at_index(tw, i);
      const json& row = (*t)[i];
      if (!row.is_array() || row.size() != width) fail(w, "expected " + std::to_string(width) + " entries");
      each(row, w);
    }
  };
  rows("order", 2, [&](const json& r, const std::string& w) {
    const Node lo = node(r[0], at_index(w, 0)), hi = node(r[1], at_index(w, 1));
    if (lo == hi || f.less(hi, lo)) fail(w, "edge would close a cycle");
    f.add_edge(lo, hi);
  });
  rows("meet", 3, [&](const json& r, const std::string& w) {
    f.declare_meet(node(r[0], at_index(w, 0)), node(r[1], at_index(w, 1)), node(r[2], at_index(w, 2)));
  });
  rows("suc", 3, [&](const json& r, const std::string& w) {
    f.declare_suc(node(r[0], at_index(w, 0)), node(r[1], at_index(w, 1)), node(r[2], at_index(w, 2)));
  });
  rows("pre", 2, [&](const json& r, const std::string& w) {
    f.declare_pre(node(r[0], at_index(w, 0)), node(r[1], at_index(w, 1)));
  });
  rows("lim", 2, [&](const json& r, const std::string& w) {
    f.declare_lim(node(r[0], at_index(w, 0)), node(r[1], at_index(w, 1)));
  });
  rows("g", 3, [&](const json& r, const std::string& w) {
    f.declare_g(node(r[0], at_index(w, 0)), sort_index(s, r[1], at_index(w, 1)), node(r[2], at_index(w, 2)));
  });
  rows("constants", 3, [&](const json& r, const std::string& w) {
    const auto i = integer(r[1], at_index(w, 1));
    if (i < 0) fail(at_index(w, 1), "negative constant number");
    f.declare_constant(sort_index(s, r[0], at_index(w, 0)), static_cast<int>(i), node(r[2], at_index(w, 2)));
  });
  if (const json* mc = find(j, where, "meet_closed")) {
    if (!mc->is_boolean()) fail(at_key(where, "meet_closed"), "expected true or false");
    f.set_meet_closed(mc->get<bool>());
  }
  return f;
}

json coloring_json(const Coloring& c) {
  json j;
  j["N"] = c.N;
  j["arity"] = c.arity;
  j["default"] = c.default_color;
  json entries = json::array();
  for (const auto& [t, col] : c.table) entries.push_back({t, col});
  j["entries"] = entries;
  return j;
}

Coloring read_coloring(const json& j, const std::string& where) {
  Coloring c;
  c.N = static_cast<int>(integer(need(j, where, "N"), at_key(where, "N")));
  if (c.N < 0) fail(at_key(where, "N"), "must be non-negative");
  if (const json* a = find(j, where, "arity")) c.arity = static_cast<int>(integer(*a, at_key(where, "arity")));
  if (const json* d = find(j, where, "default")) c.default_color = color(*d, at_key(where, "default"));
  if (const json* e = find(j, where, "entries")) {
    const std::string ew = at_key(where, "entries");
    array(*e, ew);
    for (std::size_t i = 0; i < e->size(); ++i) {
      const std::string w = at_index(ew, i);
      const json& row = (*e)[i];
      if (!row.is_array() || row.size() != 2) fail(w, "expected [tuple, color]");
      const json& t = array(row[0], at_index(w, 0));
      std::vector<int> tuple;
      for (std::size_t k = 0; k < t.size(); ++k) {
        const auto x = integer(t[k], at_index(at_index(w, 0), k));
        if (x < 0 || x >= c.N) fail(at_index(at_index(w, 0), k), "index out of range");
        if (!tuple.empty() && x <= tuple.back()) fail(at_index(w, 0), "tuple must increase");
        tuple.push_back(static_cast<int>(x));
      }
      if (tuple.empty() || static_cast<int>(tuple.size()) > c.arity) fail(at_index(w, 0), "tuple length out of range");
      c.table[tuple] = color(row[1], at_index(w, 1));
    }
  }
  return c;
}

json ptriple_json(const PTriple& p) {
  const Fragment& f = p.tree;
  json j;
  j["fragment"] = fragment_json(f);
  j["arity"] = p.arity;
  json d = json::array();
  for (const auto& [t, c] : p.d) {
    json ids = json::array();
    for (Node x : t) ids.push_back(f.id(x));
    d.push_back({ids, c});
  }
  std::sort(d.begin(), d.end());
  j["d"] = d;
  json e = json::object();
  for (Node x = 0; x < f.size(); ++x) e[f.id(x)] = p.e_class.at(static_cast<std::size_t>(x));
  j["E"] = e;
  j["source"] = coloring_json(p.source);
  json levels = json::array();
  for (const auto& o : p.source_levels) levels.push_back(o.str());
  j["source_levels"] = levels;
  return j;
}

PTriple read_ptriple(const json& j, const std::string& where) {
  PTriple p;
  p.tree = read_fragment(need(j, where, "fragment"), at_key(where, "fragment"));
  const Fragment& f = p.tree;
  if (const json* a = find(j, where, "arity")) p.arity = static_cast<int>(integer(*a, at_key(where, "arity")));
  if (const json* d = find(j, where, "d")) {
    const std::string dw = at_key(where, "d");
    array(*d, dw);
    for (std::size_t i = 0; i < d->size(); ++i) {
      const std::string w = at_index(dw, i);
      const json& row = (*d)[i];
      if (!row.is_array() || row.size() != 2) fail(w, "expected [ids, color]");
      const json& ids = array(row[0], at_index(w, 0));
      std::vector<Node> t;
      for (std::size_t k = 0; k < ids.size(); ++k) {
        const std::string id = str(ids[k], at_index(at_index(w, 0), k));
        const auto n = f.find(id);
        if (!n) fail(at_index(at_index(w, 0), k), "unknown node '" + id + "'");
        t.push_back(*n);
      }
      p.d[t] = color(row[1], at_index(w, 1));
    }
  }
  const json& e = need(j, where, "E");
  const std::string ew = at_key(where, "E");
  if (!e.is_object()) fail(ew, "expected an object");
  p.e_class.assign(static_cast<std::size_t>(f.size()), -1);
  for (const auto& [id, cls] : e.items()) {
    const auto n = f.find(id);
    if (!n) fail(at_key(ew, id), "unknown node '" + id + "'");
    p.e_class[*n] = static_cast<int>(integer(cls, at_key(ew, id)));
  }
  for (Node x = 0; x < f.size(); ++x) {
    if (p.e_class[x] < 0) fail(ew, "no class for '" + f.id(x) + "'");
  }
  if (const json* s = find(j, where, "source")) p.source = read_coloring(*s, at_key(where, "source"));
  if (const json* l = find(j, where, "source_levels")) {
    const std::string lw = at_key(where, "source_levels");
    array(*l, lw);
    for (std::size_t i = 0; i < l->size(); ++i) p.source_levels.push_back(ordinal((*l)[i], at_index(lw, i)));
  }
  return p;
}

Fragment fragment_or_path(const json& j, const std::string& where, const std::filesystem::path& dir) {
  if (!j.is_string()) return read_fragment(j, where);
  const std::filesystem::path p = dir / j.get<std::string>();
  return located(where, [&] { return fragment_from_json(read_text_file(p)); });
}

Term read_term(const Shape& S, const json& j, const std::string& where) {
  if (!j.is_object() || j.size() == 0) fail(where, "expected a term object");
  if (const json* v = find(j, where, "var")) {
    return Term::var(static_cast<int>(integer(*v, at_key(where, "var"))),
                     sort_index(S, need(j, where, "sort"), at_key(where, "sort")));
  }
  if (const json* c = find(j, where, "const")) {
    return Term::constant(sort_index(S, *c, at_key(where, "const")),
                          static_cast<int>(integer(need(j, where, "i"), at_key(where, "i"))));
  }
  auto binary = [&](const char* key, Term (*make)(Term, Term)) -> std::optional<Term> {
    const json* a = find(j, where, key);
    if (!a) return std::nullopt;
    const std::string w = at_key(where, key);
    if (!a->is_array() || a->size() != 2) fail(w, "expected two terms");
    return make(read_term(S, (*a)[0], at_index(w, 0)), read_term(S, (*a)[1], at_index(w, 1)));
  };
  if (auto t = binary("meet", &Term::meet)) return *t;
  if (auto t = binary("suc", &Term::suc)) return *t;
  if (const json* a = find(j, where, "pre")) return Term::pre(read_term(S, *a, at_key(where, "pre")));
  if (const json* a = find(j, where, "lim")) return Term::lim(read_term(S, *a, at_key(where, "lim")));
  if (const json* a = find(j, where, "g")) {
    return Term::g(read_term(S, *a, at_key(where, "g")), sort_index(S, need(j, where, "to"), at_key(where, "to")));
  }
  fail(where, "unknown term operator '" + j.begin().key() + "'");
}

Formula read_formula(const Shape& S, const json& j, const std::string& where) {
  if (j.is_boolean() && j.get<bool>()) return Formula::truth();
  if (j.is_string() && j.get<std::string>() == "true") return Formula::truth();
  if (!j.is_object() || j.size() == 0) fail(where, "expected a formula object");
  auto pair_of = [&](const char* key) -> std::optional<std::pair<Term, Term>> {
    const json* a = find(j, where, key);
    if (!a) return std::nullopt;
    const std::string w = at_key(where, key);
    if (!a->is_array() || a->size() != 2) fail(w, "expected two terms");
    return std::pair{read_term(S, (*a)[0], at_index(w, 0)), read_term(S, (*a)[1], at_index(w, 1))};
  };
  auto list_of = [&](const char* key) -> std::optional<std::vector<Formula>> {
    const json* a = find(j, where, key);
    if (!a) return std::nullopt;
    const std::string w = at_key(where, key);
    std::vector<Formula> out;
    for (std::size_t i = 0; i < array(*a, w).size(); ++i) out.push_back(read_formula(S, (*a)[i], at_index(w, i)));
    return out;
  };
  if (auto p = pair_of("eq")) return Formula::eq(p->first, p->second);
  if (auto p = pair_of("less")) return Formula::less(p->first, p->second);
  if (const json* a = find(j, where, "in")) {
    return Formula::in_sort(read_term(S, *a, at_key(where, "in")),
                            sort_index(S, need(j, where, "sort"), at_key(where, "sort")));
  }
  if (const json* a = find(j, where, "not")) return Formula::negation(read_formula(S, *a, at_key(where, "not")));
  if (auto fs = list_of("and")) return Formula::conjunction(std::move(*fs));
  if (auto fs = list_of("or")) return Formula::disjunction(std::move(*fs));
  fail(where, "unknown formula operator '" + j.begin().key() + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string shape_to_json(const Shape& s) { return dump(shape_json(s)); }
Shape shape_from_json(const std::string& text) { return read_shape(parse_document(text), ""); }

std::string fragment_to_json(const Fragment& f) { return dump(fragment_json(f)); }
Fragment fragment_from_json(const std::string& text) { return read_fragment(parse_document(text), ""); }

std::string coloring_to_json(const Coloring& c) { return dump(coloring_json(c)); }
Coloring coloring_from_json(const std::string& text) { return read_coloring(parse_document(text), ""); }

std::string ptriple_to_json(const PTriple& p) { return dump(ptriple_json(p)); }
PTriple ptriple_from_json(const std::string& text) { return read_ptriple(parse_document(text), ""); }

Formula formula_from_json(const std::string& text, const Shape& shape) {
  const Formula phi = read_formula(shape, parse_document(text), "");
  std::function<void(const Formula&)> check = [&](const Formula& f) {
    if (f.kind == Formula::Kind::eq || f.kind == Formula::Kind::less || f.kind == Formula::Kind::in_sort) {
      check_sorts(f.lhs, shape);
      if (f.kind != Formula::Kind::in_sort) check_sorts(f.rhs, shape);
    }
    for (const auto& a : f.args) check(a);
  };
  try {
    check(phi);
  } catch (const Error& e) {
    fail("formula", e.message());
  }
  return phi;
}

GlueSpec glue_spec_from_json(const std::string& text, const std::filesystem::path& dir) {
  const json j = parse_document(text);
  GlueSpec g;
  g.shape = read_shape(need(j, "", "shape"), "shape");
  const Shape& S = g.shape;
  const json& inner = array(need(j, "", "inner"), "inner");
  for (std::size_t i = 0; i < inner.size(); ++i) g.inner.push_back(sort_index(S, inner[i], at_index("inner", i)));
  g.base = fragment_or_path(need(j, "", "base"), "base", dir);
  if (const json* b = find(j, "", "boundary")) {
    if (!b->is_object()) fail("boundary", "expected an object");
    for (const auto& [id, fj] : b->items()) {
      const auto slot = S.find(id);
      if (!slot) fail(at_key("boundary", id), "unknown sort");
      g.boundary[*slot] = fragment_or_path(fj, at_key("boundary", id), dir);
    }
  }
  if (const json* c = find(j, "", "connectors")) {
    if (!c->is_object()) fail("connectors", "expected an object");
    for (const auto& [id, table] : c->items()) {
      const std::string w = at_key("connectors", id);
      const auto slot = S.find(id);
      if (!slot) fail(w, "unknown sort");
      if (!table.is_object()) fail(w, "expected an object");
      for (const auto& [from, to] : table.items()) g.connectors[*slot][from] = str(to, at_key(w, from));
    }
  }
  return g;
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace twb
