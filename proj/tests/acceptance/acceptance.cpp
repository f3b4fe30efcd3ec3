// Acceptance run: twelve criteria, one PASS/FAIL line each. The process exits
// non-zero when any criterion fails or overruns its time limit.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/combinatorics.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/transfer.hpp"
#include "twb/closure.hpp"
#include "twb/error.hpp"
#include "twb/experiments.hpp"
#include "twb/fragment.hpp"
#include "twb/glue.hpp"
#include "twb/indis.hpp"
#include "twb/partition.hpp"
#include "twb/qe.hpp"
#include "twb/samples.hpp"
#include "twb/types.hpp"

using namespace twb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 3) failures.push_back(what);
  }
};

struct Criterion {
  int number;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

std::vector<Node> originals(const Fragment& f) {
  std::vector<Node> out;
  for (Node x = 0; x < f.size(); ++x) {
    if (f.id(x)[0] != '_') out.push_back(x);
  }
  return out;
}

std::string str(std::uint64_t n) { return std::to_string(n); }

// ----------------------------------------------------------------------------

Outcome axiom_validator() {
  Outcome o;
  testgen::Rng rng(1001);
  const Ordinal bound = Ordinal::omega_power(1, 4);
  int clean = 0;
  for (int i = 0; i < 50; ++i) {
    const Fragment f = testgen::random_fragment(rng, testgen::uniform(rng, 1, 40), 0.25);
    bool below = true;
    for (Node x = 0; x < f.size(); ++x) below = below && f.level(x) < bound;
    o.require(below, "level bound");
    const auto v = validate(f);
    o.require(v.empty(), "fragment " + str(i) + ": " + (v.empty() ? "" : v[0].name));
    clean += v.empty();
  }
  const Fragment base = fixture::two_sort_theta();
  int rejected = 0, mutations = 0;
  for (const auto& m : fixture::axiom_mutations()) {
    ++mutations;
    Fragment f = base;
    m.apply(f);
    const bool named = fixture::has_violation(validate(f, m.mode), m.expected);
    o.require(named && !fixture::has_violation(validate(base, m.mode), m.expected), "mutation " + m.expected);
    rejected += named;
  }
  o.detail = str(clean) + "/50 random trees clean, " + str(rejected) + "/" + str(mutations) +
             " single-edit mutations rejected by name";
  return o;
}

Outcome closure_oracle() {
  Outcome o;
  testgen::Rng rng(1002);
  int checks = 0;
  for (int i = 0; i < 100; ++i) {
    const Fragment base = testgen::random_fragment(rng, testgen::uniform(rng, 1, 25));
    const Fragment f = complete(base, {.rank = 2});
    const auto A = testgen::sample(rng, base.size(), testgen::uniform(rng, 0, std::min(3, base.size())));
    for (int k = 0; k <= 2; ++k) {
      const auto got = closure(f, A, ClosureVariant::k, k);
      o.require(std::set<Node>(got.begin(), got.end()) == oracle::terms_up_to_rank(f, A, k),
                "fragment " + str(i) + " k=" + str(k));
      ++checks;
    }
  }
  o.detail = str(checks) + " closures equal to the term-enumeration oracle";
  return o;
}

struct TypePair {
  Fragment f;
  std::vector<Node> a, b;
  int k;
};

// Random pairs of tuples from completed random trees; every third pair is
// steered toward an equal type so both outcomes are well represented.
std::vector<TypePair> type_pairs() {
  testgen::Rng rng(1003);
  std::vector<TypePair> out;
  while (out.size() < 500) {
    const Fragment base = testgen::random_fragment(rng, testgen::uniform(rng, 3, 12));
    TypePair p{complete(base, {.rank = 2}), {}, {}, testgen::uniform(rng, 0, 2)};
    const int n = testgen::uniform(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      p.a.push_back(testgen::uniform(rng, 0, base.size() - 1));
      p.b.push_back(testgen::uniform(rng, 0, base.size() - 1));
    }
    if (out.size() % 3 == 0) {
      const auto want = tp_code(p.f, p.a, {}, p.k);
      for (Node y = 0; y < base.size(); ++y) {
        auto c = p.b;
        c[0] = y;
        if (tp_code(p.f, c, {}, p.k) == want) {
          p.b = c;
          break;
        }
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

const std::vector<TypePair>& shared_pairs() {
  static const std::vector<TypePair> pairs = type_pairs();
  return pairs;
}

Outcome type_codes() {
  Outcome o;
  int equal = 0, i = 0;
  for (const auto& p : shared_pairs()) {
    const bool same = tp_code(p.f, p.a, {}, p.k) == tp_code(p.f, p.b, {}, p.k);
    const int found = count_isomorphisms(p.f, p.a, p.f, p.b, p.k, 2);
    const int brute = oracle::brute_isomorphisms(p.f, p.a, p.f, p.b, p.k, 2);
    o.require(same == (found > 0) && same == (brute > 0), "pair " + str(i) + ": code vs witness");
    o.require(found <= 1 && brute <= 1, "pair " + str(i) + ": witness not unique");
    equal += same;
    ++i;
  }
  o.detail = str(shared_pairs().size()) + " pairs (" + str(equal) +
             " equal), code equality matches both isomorphism searches, witnesses unique";
  return o;
}

Outcome reduction_laws() {
  Outcome o;
  int mono = 0, proj = 0, shift = 0, i = 0;
  for (const auto& p : shared_pairs()) {
    const std::string at = "pair " + str(i++);
    for (int k = 0; k <= 2; ++k) {
      if (!equiv_k(p.f, p.a, p.f, p.b, k)) continue;
      for (int j = 0; j < k; ++j) {
        o.require(equiv_k(p.f, p.a, p.f, p.b, j).has_value(), at + ": monotonicity");
        ++mono;
      }
      for (std::size_t drop = 0; p.a.size() > 1 && drop < p.a.size(); ++drop) {
        auto a = p.a, b = p.b;
        a.erase(a.begin() + static_cast<std::ptrdiff_t>(drop));
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(drop));
        o.require(equiv_k(p.f, a, p.f, b, k).has_value(), at + ": projection");
        ++proj;
      }
      if (k >= 1) {
        const auto w = *equiv_k(p.f, p.a, p.f, p.b, k);
        std::map<Node, Node> h(w.begin(), w.end());
        const auto cl = closure_list(p.f, p.a, ClosureVariant::k, 1);
        std::vector<Node> image;
        for (Node x : cl) image.push_back(h.at(x));
        o.require(equiv_k(p.f, cl, p.f, image, k - 1).has_value(), at + ": shift");
        ++shift;
      }
    }
  }
  o.detail = str(mono) + " monotonicity, " + str(proj) + " projection, " + str(shift) + " shift checks";
  return o;
}

Outcome qe_transfer() {
  Outcome o;
  const Shape shapes[] = {Shape(), Shape::single(), Shape::binary(1)};
  testgen::Rng rng(1005);
  int done = 0, brute_checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Shape& shape = shapes[i % 3];
    const int m1 = (i / 3) % 2;
    const auto t = testgen::random_transfer_instance(rng, shape, m1);
    const std::string at = "instance " + str(i);
    try {
      const Extension e = extend_one_point(t.fA, t.a, t.c, t.fB, t.b, m1);
      std::vector<Node> ca{t.c}, db{e.d};
      ca.insert(ca.end(), t.a.begin(), t.a.end());
      db.insert(db.end(), t.b.begin(), t.b.end());
      o.require(equiv_k(t.fA, ca, e.fragment, db, m1).has_value(), at + ": not equivalent");
      if (oracle::terms_up_to_rank(t.fA, ca, m1).size() <= 8) {
        o.require(oracle::brute_isomorphisms(t.fA, ca, e.fragment, db, m1, 1) == 1, at + ": brute oracle");
        ++brute_checked;
      }
      o.require(validate(e.fragment).empty(), at + ": extension invalid");
      ++done;
    } catch (const Error& e) {
      o.require(false, at + ": " + e.what());
    }
  }
  for (std::uint64_t m1 = 0; m1 <= 6; ++m1) o.require(m2(m1, 1, Shape::single()) == 2 * m1 + 1, "m2 value");
  o.detail = str(done) + "/200 extensions equivalent and valid (" + str(brute_checked) +
             " also by brute force); m2(m1,1,root) = 2m1+1 for m1 <= 6";
  return o;
}

Outcome vc_degree() {
  Outcome o;
  std::ostringstream d;
  for (VcFamily fam : {VcFamily::chain, VcFamily::binary}) {
    std::vector<int> degrees;
    for (int k = 0; k <= 2; ++k) degrees.push_back(estimate_degree(vc_series(fam, k)));
    o.require(degrees[0] == degrees[1] && degrees[1] == degrees[2], std::string(vc_family_name(fam)) + " degrees differ");
    d << vc_family_name(fam) << " " << degrees[0] << "/" << degrees[1] << "/" << degrees[2] << "  ";
  }
  o.detail = "degrees for k=0/1/2: " + d.str();
  return o;
}

Outcome dichotomy() {
  Outcome o;
  // Searches at rank 1 need closed inputs, so every fixture is completed first.
  std::vector<Fragment> bases{h_iteration_sample(), fixture::two_sort_theta()};
  testgen::Rng rng(1007);
  for (int i = 0; i < 6; ++i) bases.push_back(testgen::random_fragment(rng, testgen::uniform(rng, 5, 12)));
  std::vector<Fragment> fixtures;
  for (const auto& b : bases) {
    Fragment f = complete(b, {.rank = 2});
    f.set_mode(Mode::classT);
    fixtures.push_back(f);
  }
  int windows = 0, fans = 0, ai = 0, neither_decreasing = 0, neither_other = 0;
  for (std::size_t fi = 0; fi < fixtures.size(); ++fi) {
    const Fragment& f = fixtures[fi];
    o.require(validate(f, Mode::classT).empty(), "fixture " + str(fi) + " not in the class");
    const auto A = originals(f);
    for (int L = 4; L <= 6; ++L) {
      for_each_indiscernible(f, A, L, 1, 3, [&](const std::vector<Node>& s) {
        ++windows;
        const auto c = classify(f, s);
        if (c.pattern == Pattern::Neither) {
          bool decreasing = true;
          for (std::size_t i = 0; i + 1 < s.size(); ++i) decreasing = decreasing && f.less(s[i + 1], s[i]);
          (decreasing ? neither_decreasing : neither_other) += 1;
          o.require(false, "Neither in fixture " + str(fi));
        }
        if (c.pattern == Pattern::Fan) ++fans;
        if (c.pattern == Pattern::AlmostIncreasing) {
          ++ai;
          for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 2; j < s.size(); ++j)
              o.require(f.meet(s[i], s[j]) == f.meet(s[i], s[i + 1]), "meet collapse in fixture " + str(fi));
          }
        }
        return true;
      });
    }
  }
  o.require(windows > 0, "no windows");
  o.detail = str(windows) + " indiscernible windows: " + str(fans) + " fan, " + str(ai) + " almost increasing, " +
             str(neither_decreasing + neither_other) + " neither (" + str(neither_decreasing) +
             " of them strictly decreasing chains)";
  return o;
}

Outcome h_iteration() {
  Outcome o;
  const Fragment f = h_iteration_sample();
  const HTrace t = h_iterate(f, h_iteration_window(f), 10);
  o.require(t.stop == "fan", "stopped by " + t.stop);
  o.require(!t.steps.empty() && t.steps.back().classification.pattern == Pattern::Fan, "no fan");
  o.require(t.steps.size() <= 3, "more than two H steps");
  for (std::size_t i = 1; i < t.steps.size(); ++i)
    o.require(!(t.steps[i - 1].first_level < t.steps[i].first_level), "level increased at step " + str(i));
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    const auto& s = t.steps[n].seq;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const auto m = f.meet(s[i], s[i + 1]);
      o.require(m && f.lim(*m) && f.suc(*f.lim(*m), s[i]) == s[i], "step " + str(n) + " window " + str(i));
    }
  }
  std::ostringstream d;
  d << (t.steps.empty() ? 0 : t.steps.size() - 1) << " H steps to a fan, levels";
  for (const auto& s : t.steps) d << " " << s.first_level.str();
  o.detail = d.str();
  return o;
}

Outcome ramsey() {
  Outcome o;
  auto pair_coloring = [](int N, std::uint64_t bits) {
    Coloring c;
    c.N = N;
    c.arity = 2;
    int b = 0;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) c.table[{i, j}] = (bits >> b++) & 1U;
    }
    return c;
  };
  int six_ok = 0;
  for (std::uint64_t bits = 0; bits < (1U << 15); ++bits) {
    const auto h = find_homogeneous(pair_coloring(6, bits), 3);
    const bool ok = h && testgen::homogeneous_brute(pair_coloring(6, bits), h->indices);
    o.require(ok, "coloring " + str(bits) + " of [6]");
    six_ok += ok;
  }
  std::optional<std::uint64_t> five_bad;
  for (std::uint64_t bits = 0; bits < (1U << 10) && !five_bad; ++bits) {
    if (!find_homogeneous(pair_coloring(5, bits), 3)) five_bad = bits;
  }
  o.require(five_bad.has_value(), "every coloring of [5] has a triple");
  if (five_bad) {
    std::vector<int> v{0, 1, 2};
    const Coloring c = pair_coloring(5, *five_bad);
    do {
      o.require(!testgen::homogeneous_brute(c, v), "found coloring of [5] has a triple");
    } while (testgen::next_combination(v, 5));
  }
  o.detail = str(six_ok) + "/32768 colorings of [6] have a homogeneous triple; coloring " +
             (five_bad ? str(*five_bad) : std::string("none")) + " of [5] has none";
  return o;
}

Outcome easy_direction() {
  Outcome o;
  testgen::Rng rng(1010);
  int subsequences = 0;
  for (int i = 0; i < 50; ++i) {
    const Fragment base = testgen::random_fragment(rng, testgen::uniform(rng, 6, 16), 0.1);
    const Fragment f = complete(base, {.rank = 2});
    const auto idx = testgen::sample(rng, base.size(), std::min(base.size(), 8));
    const std::vector<Node> seq(idx.begin(), idx.end());
    const int k = i % 2;
    const Coloring c = coloring_from_sequence(f, seq, k, 1);
    std::vector<int> pick{0, 1, 2, 3};
    do {
      if (!testgen::homogeneous_brute(c, pick)) continue;
      std::vector<Node> sub;
      for (int j : pick) sub.push_back(seq[j]);
      o.require(is_indiscernible(f, Window{.seq = sub, .rank = k, .arity = 1, .gap = 1}),
                "sequence " + str(i) + " k=" + str(k));
      ++subsequences;
    } while (testgen::next_combination(pick, c.N));
  }
  o.require(subsequences > 0, "no homogeneous subsequences");
  o.detail = str(subsequences) + " homogeneous length-4 subsequences of 50 colorings, all indiscernible (arity 1, k 0 and 1)";
  return o;
}

Outcome q_laws() {
  Outcome o;
  // The shipped triple plus every coloring of the Suc_lim singletons and pairs of the 6-chain.
  std::vector<PTriple> triples{hard6_sample()};
  const int sl[] = {1, 3, 5};
  for (unsigned bits = 0; bits < 64; ++bits) {
    Coloring c;
    c.N = 6;
    c.arity = 2;
    int b = 0;
    for (int i : sl) c.table[{i}] = (bits >> b++) & 1U;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) c.table[{sl[i], sl[j]}] = (bits >> b++) & 1U;
    }
    triples.push_back(p_from_coloring(c, hard6_levels()));
  }
  int nodes = 0, lifts = 0, windows = 0;
  for (std::size_t ti = 0; ti < triples.size(); ++ti) {
    const PTriple& p = triples[ti];
    const std::string at = "triple " + str(ti);
    o.require(p.tree.size() == 6 && suc_lim_nodes(p.tree).size() == 3, at + ": base shape");
    const QFragment q = q_enumerate(p, 2, 2);
    for (Node x = 0; x < q.triple.tree.size(); ++x) {
      const QNode& a = q.nodes[x];
      o.require(q.triple.tree.level(x) == Ordinal::nat(static_cast<std::uint64_t>(a.length())), at + ": lev != lg");
      o.require(qnode_violations(p, a).empty() && testgen::tight(p, a), at + ": tightness");
      ++nodes;
    }
    for (Node t : suc_lim_nodes(p.tree)) {
      const QNode a = lift_element(p, t);
      o.require(Ordinal::nat(static_cast<std::uint64_t>(a.length())) <= p.tree.level(t), at + ": lift too long");
      ++lifts;
    }
    const KeyClaimReport r = key_claim_check(p, q);
    o.require(r.ok(), at + ": key claim");
    windows += r.lifted_windows + r.branch_windows;
  }
  o.detail = str(triples.size()) + " base triples, " + str(nodes) + " lifted nodes, " + str(lifts) + " lifts, " +
             str(windows) + " key-claim windows";
  return o;
}

Outcome witnesses() {
  Outcome o;
  std::ostringstream d;
  for (WitnessCase c : {WitnessCase::theta, WitnessCase::singular, WitnessCase::regular, WitnessCase::inaccessible}) {
    const std::string name = witness_case_name(c);
    WitnessParams p;
    const WitnessModel w = build_witness(c, p);
    p.control = true;
    const WitnessModel ctl = build_witness(c, p);
    o.require(validate(w.model, Mode::theta).empty(), name + ": witness invalid");
    o.require(validate(ctl.model, Mode::theta).empty(), name + ": control invalid");
    o.require(w.model.size() == ctl.model.size(), name + ": sizes differ");
    const auto found = search_indiscernible(w.model, w.A, 4, 1, 2);
    const auto control = search_indiscernible(ctl.model, ctl.A, 4, 1, 2);
    o.require(!found, name + ": witness has an indiscernible sequence");
    o.require(control.has_value(), name + ": control has none");
    if (control) {
      o.require(oracle::brute_isomorphisms(ctl.model, {control->seq[0], control->seq[1]}, ctl.model,
                                           {control->seq[2], control->seq[3]}, 1) >= 1,
                name + ": control sequence fails the brute check");
    }
    d << name << " " << w.model.size() << " nodes  ";
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "axiom validator", 10, axiom_validator},
      {2, "closure equals rank-bounded terms", 60, closure_oracle},
      {3, "type-code soundness", 120, type_codes},
      {4, "reduction laws", 120, reduction_laws},
      {5, "one-point extension transfer", 300, qe_transfer},
      {6, "type-count degree independent of rank", 300, vc_degree},
      {7, "fan / almost-increasing dichotomy", 300, dichotomy},
      {8, "H-map iteration", 60, h_iteration},
      {9, "pair colorings of [6] and [5]", 60, ramsey},
      {10, "homogeneous subsequences are indiscernible", 120, easy_direction},
      {11, "lifted-triple laws", 300, q_laws},
      {12, "witness models and controls", 300, witnesses},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) o.require(false, "time limit " + std::to_string(static_cast<int>(c.limit_s)) + " s exceeded");
    std::string detail = o.detail;
    for (const auto& f : o.failures) detail += (detail.empty() ? "" : "; ") + f;
    std::printf("criterion %2d %s  %-44s %6.2f s  %s\n", c.number, o.pass ? "PASS" : "FAIL", c.title, secs,
                detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
