#include "twb/term.hpp"

#include <algorithm>
#include <functional>

#include "twb/error.hpp"

namespace twb {

Term Term::var(int i, int sort) {
  Term t;
  t.op = Op::var;
  t.index = i;
  t.sort = sort;
  return t;
}

Term Term::constant(int sort, int i) {
  Term t;
  t.op = Op::constant;
  t.sort = sort;
  t.index = i;
  return t;
}

Term Term::meet(Term a, Term b) {
  Term t;
  t.op = Op::meet;
  t.sort = a.value_sort();
  t.args = {std::move(a), std::move(b)};
  return t;
}

Term Term::suc(Term a, Term b) {
  Term t;
  t.op = Op::suc;
  t.sort = a.value_sort();
  t.args = {std::move(a), std::move(b)};
  return t;
}

Term Term::pre(Term a) {
  Term t;
  t.op = Op::pre;
  t.sort = a.value_sort();
  t.args = {std::move(a)};
  return t;
}

Term Term::lim(Term a) {
  Term t;
  t.op = Op::lim;
  t.sort = a.value_sort();
  t.args = {std::move(a)};
  return t;
}

Term Term::g(Term a, int target) {
  Term t;
  t.op = Op::g;
  t.sort = a.value_sort();
  t.target = target;
  t.args = {std::move(a)};
  return t;
}

int Term::value_sort() const {
  const std::size_t want = (op == Op::var || op == Op::constant) ? 0 : (op == Op::meet || op == Op::suc) ? 2 : 1;
  if (args.size() != want) throw Error(ErrorKind::SortError, "wrong argument count in " + str());
  for (const Term& a : args) {
    if (a.value_sort() != sort) throw Error(ErrorKind::SortError, "argument sort mismatch in " + str());
  }
  if (op == Op::g) {
    if (target < 0) throw Error(ErrorKind::SortError, "G without target in " + str());
    return target;
  }
  return sort;
}

std::string Term::str(const Shape* shape) const {
  auto sname = [&](int s) { return shape ? shape->id(s) : std::to_string(s); };
  switch (op) {
    case Op::var: return "x" + std::to_string(index);
    case Op::constant: return "c[" + sname(sort) + "," + std::to_string(index) + "]";
    case Op::meet: return "meet(" + args[0].str(shape) + "," + args[1].str(shape) + ")";
    case Op::suc: return "suc(" + args[0].str(shape) + "," + args[1].str(shape) + ")";
    case Op::pre: return "pre(" + args[0].str(shape) + ")";
    case Op::lim: return "lim(" + args[0].str(shape) + ")";
    case Op::g: return "G" + sname(target) + "(" + args[0].str(shape) + ")";
  }
  return "?";
}

int r_suc(const Term& t) {
  t.value_sort();
  int inner = 0;
  for (const Term& a : t.args) inner = std::max(inner, r_suc(a));
  return (t.op == Term::Op::suc || t.op == Term::Op::pre) ? inner + 1 : inner;
}

void check_sorts(const Term& t, const Shape& shape) {
  t.value_sort();
  if (t.sort < 0 || t.sort >= shape.size()) throw Error(ErrorKind::SortError, "unknown sort in " + t.str());
  if (t.op == Term::Op::g && !shape.is_child(t.sort, t.target))
    throw Error(ErrorKind::SortError, "G along a non-edge in " + t.str(&shape));
  for (const Term& a : t.args) check_sorts(a, shape);
}

std::optional<Node> eval_term(const Fragment& f, const Term& t, const std::vector<Node>& assignment) {
  switch (t.op) {
    case Term::Op::var: {
      if (t.index < 0 || static_cast<std::size_t>(t.index) >= assignment.size())
        throw Error(ErrorKind::SortError, "unassigned variable x" + std::to_string(t.index));
      const Node n = assignment[t.index];
      if (f.sort(n) != t.sort) throw Error(ErrorKind::SortError, "x" + std::to_string(t.index) + " has wrong sort");
      return n;
    }
    case Term::Op::constant: return f.constant(t.sort, t.index);
    default: break;
  }
  std::vector<Node> vals;
  for (const Term& a : t.args) {
    auto v = eval_term(f, a, assignment);
    if (!v) return std::nullopt;
    vals.push_back(*v);
  }
  switch (t.op) {
    case Term::Op::meet: return f.meet(vals[0], vals[1]);
    case Term::Op::suc:
      if (!f.less(vals[0], vals[1])) return std::nullopt;
      return f.suc(vals[0], vals[1]);
    case Term::Op::pre:
      if (!f.is_successor(vals[0])) return std::nullopt;
      return f.pre(vals[0]);
    case Term::Op::lim: return f.lim(vals[0]);
    case Term::Op::g:
      if (!f.is_successor(vals[0])) return std::nullopt;
      return f.g(vals[0], t.target);
    default: return std::nullopt;
  }
}

}  // namespace twb

namespace twb {

Formula Formula::truth() { return {}; }

Formula Formula::eq(Term a, Term b) {
  Formula f;
  f.kind = Kind::eq;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return f;
}

Formula Formula::less(Term a, Term b) {
  Formula f = eq(std::move(a), std::move(b));
  f.kind = Kind::less;
  return f;
}

Formula Formula::in_sort(Term a, int sort) {
  Formula f;
  f.kind = Kind::in_sort;
  f.lhs = std::move(a);
  f.sort = sort;
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind = Kind::negation;
  f.args = {std::move(g)};
  return f;
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::conjunction;
  f.args = std::move(fs);
  return f;
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::disjunction;
  f.args = std::move(fs);
  return f;
}

std::string Formula::str(const Shape* shape) const {
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? op : "") + args[i].str(shape);
    return s + ")";
  };
  switch (kind) {
    case Kind::truth: return "true";
    case Kind::eq: return lhs.str(shape) + " = " + rhs.str(shape);
    case Kind::less: return lhs.str(shape) + " < " + rhs.str(shape);
    case Kind::in_sort:
      return "P[" + (shape ? shape->id(sort) : std::to_string(sort)) + "](" + lhs.str(shape) + ")";
    case Kind::negation: return "not " + args[0].str(shape);
    case Kind::conjunction: return args.empty() ? "true" : join(" and ");
    case Kind::disjunction: return args.empty() ? "false" : join(" or ");
  }
  return "";
}

namespace {

void visit_terms(const Formula& phi, const std::function<void(const Term&)>& fn) {
  switch (phi.kind) {
    case Formula::Kind::truth: return;
    case Formula::Kind::eq:
    case Formula::Kind::less:
      fn(phi.lhs);
      fn(phi.rhs);
      return;
    case Formula::Kind::in_sort: fn(phi.lhs); return;
    default:
      for (const auto& a : phi.args) visit_terms(a, fn);
  }
}

int max_var(const Term& t) {
  int m = t.op == Term::Op::var ? t.index : -1;
  for (const auto& a : t.args) m = std::max(m, max_var(a));
  return m;
}

}  // namespace

int r_suc(const Formula& phi) {
  int r = 0;
  visit_terms(phi, [&](const Term& t) { r = std::max(r, r_suc(t)); });
  return r;
}

int variable_count(const Formula& phi) {
  int m = -1;
  visit_terms(phi, [&](const Term& t) { m = std::max(m, max_var(t)); });
  return m + 1;
}

bool holds(const Fragment& f, const Formula& phi, const std::vector<Node>& assignment) {
  switch (phi.kind) {
    case Formula::Kind::truth: return true;
    case Formula::Kind::eq: {
      auto a = eval_term(f, phi.lhs, assignment);
      auto b = eval_term(f, phi.rhs, assignment);
      return a && b && *a == *b;
    }
    case Formula::Kind::less: {
      auto a = eval_term(f, phi.lhs, assignment);
      auto b = eval_term(f, phi.rhs, assignment);
      return a && b && f.less(*a, *b);
    }
    case Formula::Kind::in_sort: {
      auto a = eval_term(f, phi.lhs, assignment);
      return a && f.sort(*a) == phi.sort;
    }
    case Formula::Kind::negation: return !holds(f, phi.args[0], assignment);
    case Formula::Kind::conjunction:
      for (const auto& a : phi.args) {
        if (!holds(f, a, assignment)) return false;
      }
      return true;
    case Formula::Kind::disjunction:
      for (const auto& a : phi.args) {
        if (holds(f, a, assignment)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace twb
