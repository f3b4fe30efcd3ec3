#include "cli.hpp"

#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "report.hpp"
#include "twb/closure.hpp"
#include "twb/error.hpp"
#include "twb/experiments.hpp"
#include "twb/glue.hpp"
#include "twb/indis.hpp"
#include "twb/io.hpp"
#include "twb/partition.hpp"
#include "twb/qe.hpp"
#include "twb/types.hpp"

namespace twb::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::string format = "text";
  std::uint64_t seed = 1;
  std::uint64_t budget_nodes = 1'000'000;
  std::uint64_t budget_tuples = 20'000'000;
  int workers = 1;
};

// Runs fn(0..n-1) on up to `workers` threads; results keep their index, and
// the lowest-index exception wins, so the outcome never depends on scheduling.
template <class T>
std::vector<T> parallel_map(int n, int workers, const std::function<T(int)>& fn) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto work = [&](int start, int step) {
    for (int i = start; i < n; i += step) {
      try {
        slots[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(workers, n));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

class Session {
 public:
  Globals g;
  RunReport report;

  std::string load(const std::string& path) {
    std::string bytes = read_text_file(path);
    report.inputs.push_back({path, fnv1a64(bytes)});
    return bytes;
  }
  Fragment fragment(const std::string& path) { return relabel(path, [&] { return fragment_from_json(load(path)); }); }
  PTriple ptriple(const std::string& path) { return relabel(path, [&] { return ptriple_from_json(load(path)); }); }
  Coloring coloring(const std::string& path) { return relabel(path, [&] { return coloring_from_json(load(path)); }); }

  void violation(std::string name, std::string detail = {}) {
    report.violations.push_back({std::move(name), std::move(detail)});
  }
  void violations(const std::vector<Violation>& vs, const std::string& prefix = {}) {
    for (const auto& v : vs) violation(prefix + v.name, v.detail);
  }

 private:
  template <class F>
  static auto relabel(const std::string& path, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InputError) throw;
      throw Error(ErrorKind::InputError, path + ": " + e.message());
    }
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::InputError, "cannot write '" + path + "'");
}

std::vector<Node> nodes_of(const Fragment& f, const std::vector<std::string>& ids) {
  std::vector<Node> out;
  for (const auto& id : ids) out.push_back(f.node(id));
  return out;
}

json ids_of(const Fragment& f, const std::vector<Node>& ns) {
  json out = json::array();
  for (Node n : ns) out.push_back(f.id(n));
  return out;
}

std::vector<Node> sorted_nodes(const Fragment& f) {
  std::vector<Node> out;
  for (Node n : f.nodes_by_id()) {
    if (f.sort(n) != kUnsorted) out.push_back(n);
  }
  return out;
}

// Type codes are byte strings; reports carry them as lowercase hex.
std::string hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

json hex_codes(const std::set<TypeCode>& codes) {
  json out = json::array();
  for (const auto& c : codes) out.push_back(hex(c));
  return out;
}

json fragment_payload(const Fragment& f) { return json::parse(fragment_to_json(f)); }

// Either write the fragment to `out` or embed it in the payload.
void place_fragment(json& payload, const Fragment& f, const std::string& out) {
  if (out.empty()) {
    payload["fragment"] = fragment_payload(f);
  } else {
    write_file(out, fragment_to_json(f));
    payload["written"] = out;
  }
}

ClosureVariant parse_variant(const std::string& s) {
  static const std::map<std::string, ClosureVariant> names{
      {"wedge", ClosureVariant::wedge}, {"G", ClosureVariant::G},     {"lim", ClosureVariant::lim},
      {"suc", ClosureVariant::suc},     {"zero", ClosureVariant::zero}, {"one", ClosureVariant::one},
      {"k", ClosureVariant::k}};
  auto it = names.find(s);
  if (it == names.end()) throw Error(ErrorKind::InputError, "unknown closure variant '" + s + "'");
  return it->second;
}

// "empty", "single", "chain:N", "binary:D" or a shape file.
Shape parse_shape(Session& s, const std::string& text) {
  auto number = [&](std::size_t from) {
    try {
      return std::stoi(text.substr(from));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InputError, "bad shape '" + text + "'");
    }
  };
  if (text == "empty") return Shape();
  if (text == "single") return Shape::single();
  if (text.rfind("chain:", 0) == 0) return Shape::chain(number(6));
  if (text.rfind("binary:", 0) == 0) return Shape::binary(number(7));
  return shape_from_json(s.load(text));
}

json classification_json(const Fragment& f, const Classification& c) {
  json j{{"pattern", pattern_name(c.pattern)}};
  if (c.fan_meet) j["fan_meet"] = f.id(*c.fan_meet);
  if (!c.meet_chain.empty()) j["meet_chain"] = ids_of(f, c.meet_chain);
  return j;
}

json homogeneous_json(const std::optional<Homogeneous>& h) {
  if (!h) return nullptr;
  return {{"indices", h->indices}, {"colors", h->colors}};
}

// ---------------------------------------------------------------- commands

struct WindowOpts {
  std::string file;
  std::vector<std::string> seq;
  int k = 1;
  int r = 2;
  int gap = 1;
};

void add_window_opts(CLI::App* c, WindowOpts& o, bool with_rank) {
  c->add_option("fragment", o.file, "Fragment file")->required();
  c->add_option("--seq", o.seq, "Sequence of node ids")->delimiter(',')->required();
  if (with_rank) {
    c->add_option("--k", o.k, "Closure rank")->check(CLI::NonNegativeNumber);
    c->add_option("--r", o.r, "Tuple arity")->check(CLI::PositiveNumber);
    c->add_option("--gap", o.gap, "Gap for near indiscernibility")->check(CLI::PositiveNumber);
  }
}

struct DemoOpts {
  std::string which;
  WitnessParams params;
  int L = 4;
  int k = 1;
  int r = 2;
  std::string out;
};

json demo_side(const WitnessModel& w, const DemoOpts& o, std::uint64_t budget, std::optional<Window>* found,
               std::vector<Violation>* bad) {
  *bad = validate(w.model);
  *found = search_indiscernible(w.model, w.A, o.L, o.k, o.r, budget);
  json j{{"nodes", w.model.size()}, {"params", w.A.size()}, {"violations", bad->size()}};
  j["indiscernible"] = *found ? ids_of(w.model, (*found)->seq) : json(nullptr);
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session s;
  s.report.command.push_back("twb");
  s.report.command.insert(s.report.command.end(), args.begin(), args.end());

  CLI::App app{"Workbench for finite fragments of tree theories", "twb"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", s.g.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", s.g.seed, "Seed for randomized runs");
  app.add_option("--budget-nodes", s.g.budget_nodes, "Cap on constructed nodes")->check(CLI::PositiveNumber);
  app.add_option("--budget-tuples", s.g.budget_tuples, "Cap on enumerated tuples")->check(CLI::PositiveNumber);
  app.add_option("--workers", s.g.workers, "Worker threads")->check(CLI::PositiveNumber);

  std::function<void()> action;
  auto on = [&](CLI::App* c, std::function<void()> f) { c->callback([&action, f] { action = f; }); };
  json& payload = s.report.payload;

  // validate
  std::string file, out_path, mode;
  auto* c_validate = app.add_subcommand("validate", "Check a fragment against the axioms");
  c_validate->add_option("fragment", file, "Fragment file")->required();
  c_validate->add_option("--mode", mode, "base, theta or classT (default: the file's mode)");
  on(c_validate, [&] {
    const Fragment f = s.fragment(file);
    const Mode m = mode.empty() ? f.mode() : parse_mode(mode);
    payload = {{"nodes", f.size()}, {"mode", mode_name(m)}};
    s.violations(validate(f, m));
  });

  // complete
  int rank = 0;
  std::vector<std::string> generators;
  auto* c_complete = app.add_subcommand("complete", "Close a fragment under its functions");
  c_complete->add_option("fragment", file, "Fragment file")->required();
  c_complete->add_option("--rank", rank, "Successor rank")->check(CLI::NonNegativeNumber);
  c_complete->add_option("--generators", generators, "Node ids to close (default: all)")->delimiter(',');
  c_complete->add_option("--out", out_path, "Write the completed fragment here");
  on(c_complete, [&] {
    const Fragment f = s.fragment(file);
    const Fragment done = complete(f, {.rank = rank, .generators = nodes_of(f, generators)});
    payload = {{"nodes", done.size()}, {"added", done.size() - f.size()}};
    place_fragment(payload, done, out_path);
    s.violations(validate(done));
  });

  // close
  std::vector<std::string> seeds;
  std::string variant = "k";
  int k = 1;
  auto* c_close = app.add_subcommand("close", "Closure of a node set");
  c_close->add_option("fragment", file, "Fragment file")->required();
  c_close->add_option("--seeds", seeds, "Node ids")->delimiter(',')->required();
  c_close->add_option("--variant", variant, "wedge, G, lim, suc, zero, one or k");
  c_close->add_option("--k", k, "Rank for the k variant")->check(CLI::NonNegativeNumber);
  on(c_close, [&] {
    const Fragment f = s.fragment(file);
    const auto cl = closure(f, nodes_of(f, seeds), parse_variant(variant), k);
    payload = {{"variant", variant}, {"k", k}, {"closure", ids_of(f, cl)}};
  });

  // types
  auto* c_types = app.add_subcommand("types", "Types and type counting");
  c_types->require_subcommand(1);
  std::vector<std::string> tuple, params, domain;
  int n = 1;
  auto* c_code = c_types->add_subcommand("code", "Canonical rank-k type of a tuple over parameters");
  c_code->add_option("fragment", file, "Fragment file")->required();
  c_code->add_option("--tuple", tuple, "Node ids")->delimiter(',')->required();
  c_code->add_option("--params", params, "Parameter node ids")->delimiter(',');
  c_code->add_option("--k", k, "Rank")->check(CLI::NonNegativeNumber);
  on(c_code, [&] {
    const Fragment f = s.fragment(file);
    payload = {{"k", k}, {"code", hex(tp_code(f, nodes_of(f, tuple), nodes_of(f, params), k))}};
  });
  auto* c_count = c_types->add_subcommand("count", "Number of rank-k n-type classes over parameters");
  c_count->add_option("fragment", file, "Fragment file")->required();
  c_count->add_option("--params", params, "Parameter node ids")->delimiter(',');
  c_count->add_option("--domain", domain, "Restrict tuples to these nodes")->delimiter(',');
  c_count->add_option("--k", k, "Rank")->check(CLI::NonNegativeNumber);
  c_count->add_option("--n", n, "Tuple length")->check(CLI::PositiveNumber);
  on(c_count, [&] {
    const Fragment f = s.fragment(file);
    const auto count =
        count_type_classes(f, nodes_of(f, params), k, n, s.g.budget_tuples, nodes_of(f, domain));
    payload = {{"k", k}, {"n", n}, {"params", params.size()}, {"count", count}};
  });
  std::string family = "chain";
  int max_params = 8;
  std::vector<int> ranks{0, 1, 2};
  auto* c_vc = c_types->add_subcommand("vc-degree", "Growth degree of type counts in a parameter family");
  c_vc->add_option("--family", family, "chain or binary")->check(CLI::IsMember({"chain", "binary"}));
  c_vc->add_option("--max-params", max_params, "Largest parameter count")->check(CLI::Range(4, 8));
  c_vc->add_option("--ranks", ranks, "Ranks to compare")->delimiter(',');
  on(c_vc, [&] {
    const VcFamily fam = parse_vc_family(family);
    const auto series = parallel_map<CountSeries>(static_cast<int>(ranks.size()), s.g.workers,
                                                  [&](int i) { return vc_series(fam, ranks[i], max_params); });
    payload = {{"family", family}, {"max_params", max_params}};
    std::optional<int> first;
    bool stable = true;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      const std::string key = "k" + std::to_string(ranks[i]);
      payload["series"][key] = series[i];
      const int d = estimate_degree(series[i]);
      payload["degree_" + key] = d;
      if (first && *first != d) stable = false;
      if (!first) first = d;
    }
    payload["stable"] = stable;
    if (!stable) s.violation("degree depends on rank");
  });

  // qe
  auto* c_qe = app.add_subcommand("qe", "Quantifier elimination machinery");
  c_qe->require_subcommand(1);
  std::uint64_t m1 = 0, qk = 1;
  std::string shape_text = "single";
  auto* c_m2 = c_qe->add_subcommand("m2", "Rank needed to extend by k points at rank m1");
  c_m2->add_option("--m1", m1, "Target rank")->required();
  c_m2->add_option("--k", qk, "Number of points");
  c_m2->add_option("--shape", shape_text, "empty, single, chain:N, binary:D or a shape file");
  on(c_m2, [&] {
    payload = {{"m1", m1}, {"k", qk}, {"shape", shape_text}, {"m2", m2(m1, qk, parse_shape(s, shape_text))}};
  });
  std::string from_file, to_file, c_id;
  std::vector<std::string> a_ids, b_ids;
  int em1 = 0;
  auto* c_ext = c_qe->add_subcommand("extend", "Match one more point across equivalent tuples");
  c_ext->add_option("--from", from_file, "Fragment holding a and c")->required();
  c_ext->add_option("--a", a_ids, "Tuple a")->delimiter(',');
  c_ext->add_option("--c", c_id, "Point to match")->required();
  c_ext->add_option("--to", to_file, "Fragment holding b")->required();
  c_ext->add_option("--b", b_ids, "Tuple b")->delimiter(',');
  c_ext->add_option("--m1", em1, "Target rank")->check(CLI::NonNegativeNumber);
  c_ext->add_option("--out", out_path, "Write the extended fragment here");
  on(c_ext, [&] {
    const Fragment fA = s.fragment(from_file);
    const Fragment fB = s.fragment(to_file);
    const auto a = nodes_of(fA, a_ids);
    const auto b = nodes_of(fB, b_ids);
    const Node c = fA.node(c_id);
    const Extension e = extend_one_point(fA, a, c, fB, b, em1);
    std::vector<Node> ca{c}, db{e.d};
    ca.insert(ca.end(), a.begin(), a.end());
    db.insert(db.end(), b.begin(), b.end());
    const bool verified = equiv_k(fA, ca, e.fragment, db, em1).has_value();
    payload = {{"d", e.fragment.id(e.d)},
               {"route", e.route},
               {"new_nodes", ids_of(e.fragment, e.new_nodes)},
               {"rank_used", e.rank_used},
               {"verified", verified}};
    place_fragment(payload, e.fragment, out_path);
    if (!verified) s.violation("extension not equivalent", "rank " + std::to_string(em1));
    s.violations(validate(e.fragment), "extension: ");
  });
  std::string formula_file, witness_sort;
  std::vector<std::string> corpus_files;
  int qm = 1;
  auto* c_table = c_qe->add_subcommand("table", "Quantifier-free table for an existential formula over a corpus");
  c_table->add_option("--formula", formula_file, "Formula file; variable 0 is the witness")->required();
  c_table->add_option("--witness-sort", witness_sort, "Sort id of the witness")->required();
  c_table->add_option("--m", qm, "Configuration rank")->check(CLI::NonNegativeNumber);
  c_table->add_option("corpus", corpus_files, "Fragment files")->required();
  on(c_table, [&] {
    std::vector<Fragment> corpus;
    for (const auto& p : corpus_files) corpus.push_back(s.fragment(p));
    const Shape& shape = corpus.front().shape();
    const Formula phi = formula_from_json(s.load(formula_file), shape);
    const QECandidate q = qe_candidate(phi, shape.index_of(witness_sort), corpus, qm, s.g.budget_tuples);
    payload = {{"rank", q.rank},
               {"arity", q.arity},
               {"positive", hex_codes(q.positive)},
               {"negative", hex_codes(q.negative)},
               {"conflicting", hex_codes(q.conflicting)}};
    for (const auto& code : q.conflicting) s.violation("configuration seen both ways", hex(code));
  });

  // indis
  auto* c_indis = app.add_subcommand("indis", "Indiscernible sequences");
  c_indis->require_subcommand(1);
  WindowOpts w;
  auto window_check = [&](const char* name, const char* help, auto test) {
    auto* c = c_indis->add_subcommand(name, help);
    add_window_opts(c, w, true);
    on(c, [&, test, name] {
      const Fragment f = s.fragment(w.file);
      const Window win{nodes_of(f, w.seq), w.k, w.r, w.gap};
      const bool holds = test(f, win);
      payload = {{"holds", holds}, {"k", w.k}, {"r", w.r}, {"gap", w.gap}};
      if (!holds) s.violation(std::string("not ") + name);
    });
  };
  window_check("check", "Is the sequence indiscernible", [](const Fragment& f, const Window& x) {
    return is_indiscernible(f, x);
  });
  window_check("ni", "Is the sequence nearly indiscernible", [](const Fragment& f, const Window& x) {
    return is_NI(f, x);
  });
  window_check("hni", "Is the sequence hereditarily nearly indiscernible", [](const Fragment& f, const Window& x) {
    const int sort = x.seq.empty() ? 0 : f.sort(x.seq.front());
    return is_HNI(f, x, default_hni_terms(f, sort));
  });
  auto* c_classify = c_indis->add_subcommand("classify", "Fan or almost-increasing shape of a sequence");
  add_window_opts(c_classify, w, false);
  on(c_classify, [&] {
    const Fragment f = s.fragment(w.file);
    payload = classification_json(f, classify(f, nodes_of(f, w.seq)));
  });
  int max_iter = 8;
  auto* c_h = c_indis->add_subcommand("h-iter", "Iterate the H map until the sequence is a fan");
  add_window_opts(c_h, w, false);
  c_h->add_option("--max-iter", max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  on(c_h, [&] {
    const Fragment f = s.fragment(w.file);
    const HTrace t = h_iterate(f, nodes_of(f, w.seq), max_iter);
    payload = {{"stop", t.stop}, {"steps", json::array()}};
    for (const auto& step : t.steps) {
      json j = classification_json(f, step.classification);
      j["seq"] = ids_of(f, step.seq);
      j["first_level"] = step.first_level.str();
      payload["steps"].push_back(j);
    }
  });
  int L = 4;
  auto* c_search = c_indis->add_subcommand("search", "Exhaustive search for an indiscernible sequence");
  c_search->add_option("fragment", w.file, "Fragment file")->required();
  c_search->add_option("--params", params, "Candidate node ids (default: every sorted node)")->delimiter(',');
  c_search->add_option("--L", L, "Sequence length")->check(CLI::Range(2, 64));
  c_search->add_option("--k", w.k, "Closure rank")->check(CLI::NonNegativeNumber);
  c_search->add_option("--r", w.r, "Tuple arity")->check(CLI::PositiveNumber);
  on(c_search, [&] {
    const Fragment f = s.fragment(w.file);
    const auto A = params.empty() ? sorted_nodes(f) : nodes_of(f, params);
    const auto found = search_indiscernible(f, A, L, w.k, w.r, s.g.budget_tuples);
    payload = found ? json{{"seq", ids_of(f, found->seq)}, {"k", found->rank}, {"r", found->arity}} : json(nullptr);
    if (found) s.violation("indiscernible sequence found");
  });

  // ramsey
  auto* c_ramsey = app.add_subcommand("ramsey", "Homogeneous subsequences of colorings");
  c_ramsey->require_subcommand(1);
  std::string coloring_file;
  int delta = 3, pairs_of = 0, random_trials = 0;
  auto* c_homog = c_ramsey->add_subcommand(
      "homog", "Find a homogeneous set in a coloring file, or check every (or random) pair 2-coloring of [N]");
  c_homog->add_option("coloring", coloring_file, "Coloring file");
  c_homog->add_option("--delta", delta, "Size of the homogeneous set")->check(CLI::PositiveNumber);
  c_homog->add_option("--all-pairs", pairs_of, "Check every 2-coloring of pairs of [N]")->check(CLI::Range(2, 8));
  c_homog->add_option("--random", random_trials, "Check this many random pair 2-colorings of [N]")
      ->check(CLI::PositiveNumber);
  on(c_homog, [&] {
    if (!coloring_file.empty()) {
      const auto h = find_homogeneous(s.coloring(coloring_file), delta, s.g.budget_tuples);
      payload = homogeneous_json(h);
      if (!h) s.violation("no homogeneous set", "delta " + std::to_string(delta));
      return;
    }
    if (pairs_of == 0) throw Error(ErrorKind::InputError, "give a coloring file or --all-pairs N");
    std::vector<std::vector<int>> pairs;
    for (int i = 0; i < pairs_of; ++i) {
      for (int j = i + 1; j < pairs_of; ++j) pairs.push_back({i, j});
    }
    auto coloring_of = [&](std::uint64_t bits) {
      Coloring c;
      c.N = pairs_of;
      c.arity = 2;
      for (std::size_t p = 0; p < pairs.size(); ++p) c.table[pairs[p]] = (bits >> p) & 1U;
      return c;
    };
    std::vector<std::uint64_t> masks;
    if (random_trials > 0) {
      std::mt19937_64 rng(s.g.seed);
      for (int i = 0; i < random_trials; ++i) masks.push_back(rng() & ((std::uint64_t{1} << pairs.size()) - 1));
    } else {
      const std::uint64_t total = std::uint64_t{1} << pairs.size();
      if (total > s.g.budget_tuples) throw Error(ErrorKind::BudgetExceeded, "too many colorings");
      for (std::uint64_t m = 0; m < total; ++m) masks.push_back(m);
    }
    const int chunks = std::max(1, s.g.workers) * 4;
    const auto bad = parallel_map<std::vector<std::uint64_t>>(chunks, s.g.workers, [&](int chunk) {
      std::vector<std::uint64_t> lacking;
      for (std::size_t i = static_cast<std::size_t>(chunk); i < masks.size(); i += static_cast<std::size_t>(chunks)) {
        if (!find_homogeneous(coloring_of(masks[i]), delta)) lacking.push_back(masks[i]);
      }
      return lacking;
    });
    std::vector<std::uint64_t> lacking;
    for (const auto& b : bad) lacking.insert(lacking.end(), b.begin(), b.end());
    std::sort(lacking.begin(), lacking.end());
    lacking.erase(std::unique(lacking.begin(), lacking.end()), lacking.end());
    payload = {{"N", pairs_of}, {"delta", delta}, {"colorings", masks.size()}, {"without_homogeneous", lacking.size()}};
    if (!lacking.empty()) {
      payload["example"] = json::parse(coloring_to_json(coloring_of(lacking.front())));
      s.violation("coloring without homogeneous set", std::to_string(lacking.size()) + " colorings");
    }
  });

  // pspace
  auto* c_pspace = app.add_subcommand("pspace", "Coloring triples and the lifting operator");
  c_pspace->require_subcommand(1);
  auto* c_pval = c_pspace->add_subcommand("validate", "Check a triple file");
  c_pval->add_option("triple", file, "Triple file")->required();
  on(c_pval, [&] {
    const PTriple p = s.ptriple(file);
    payload = {{"nodes", p.tree.size()}, {"suc_lim", suc_lim_nodes(p.tree).size()}, {"colored", p.d.size()}};
    s.violations(validate_ptriple(p));
  });
  auto* c_hard = c_pspace->add_subcommand("hard", "Search for a level-wise homogeneous sequence");
  c_hard->add_option("triple", file, "Triple file")->required();
  c_hard->add_option("--delta", delta, "Sequence length")->check(CLI::PositiveNumber);
  on(c_hard, [&] {
    const PTriple p = s.ptriple(file);
    const auto seq = find_clause5_sequence(p, delta, s.g.budget_tuples);
    payload = {{"delta", delta}, {"hard", !seq}, {"sequence", seq ? ids_of(p.tree, *seq) : json(nullptr)}};
    if (seq) s.violation("not hard", "homogeneous sequence exists");
  });
  int alpha_max = 2;
  Color colors = 2;
  auto* c_qb = c_pspace->add_subcommand("q-build", "Build the lifted triple up to a length bound");
  c_qb->add_option("triple", file, "Triple file")->required();
  c_qb->add_option("--alpha-max", alpha_max, "Longest lifted node")->check(CLI::NonNegativeNumber);
  c_qb->add_option("--colors", colors, "Number of colors")->check(CLI::PositiveNumber);
  c_qb->add_option("--out", out_path, "Write the lifted triple here");
  on(c_qb, [&] {
    const PTriple p = s.ptriple(file);
    const QFragment q = q_enumerate(p, alpha_max, colors, s.g.budget_nodes);
    int longest = 0, level_mismatch = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      longest = std::max(longest, q.nodes[i].length());
      for (const auto& v : qnode_violations(p, q.nodes[i])) s.violation("node", q.triple.tree.id(static_cast<Node>(i)) + ": " + v);
      if (q.triple.tree.level(static_cast<Node>(i)) != Ordinal::nat(static_cast<std::uint64_t>(q.nodes[i].length())))
        ++level_mismatch;
    }
    const KeyClaimReport kc = key_claim_check(p, q);
    payload = {{"nodes", q.nodes.size()},
               {"longest", longest},
               {"level_mismatches", level_mismatch},
               {"key_claim",
                {{"lifted_windows", kc.lifted_windows},
                 {"qualifying", kc.qualifying},
                 {"branch_windows", kc.branch_windows},
                 {"constant_failures", kc.constant_failures},
                 {"equation_failures", kc.equation_failures},
                 {"fan_windows", kc.fan_windows},
                 {"fan_failures", kc.fan_failures}}}};
    if (!out_path.empty()) {
      write_file(out_path, ptriple_to_json(q.triple));
      payload["written"] = out_path;
    }
    if (level_mismatch) s.violation("level differs from length", std::to_string(level_mismatch) + " nodes");
    if (!kc.ok()) s.violation("key claim", "failures in the lifted windows");
    s.violations(validate_ptriple(q.triple), "lifted triple: ");
  });
  std::string node_id;
  auto* c_lift = c_pspace->add_subcommand("lift", "Lift one node of a triple");
  c_lift->add_option("triple", file, "Triple file")->required();
  c_lift->add_option("--node", node_id, "Node id")->required();
  on(c_lift, [&] {
    const PTriple p = s.ptriple(file);
    const Node t = p.tree.node(node_id);
    const QNode a = lift_element(p, t);
    payload = {{"id", qnode_id(p, a)}, {"length", a.length()}, {"eta", ids_of(p.tree, a.eta)}};
    for (const auto& v : qnode_violations(p, a)) s.violation("lifted node", v);
    if (Ordinal::nat(static_cast<std::uint64_t>(a.length())) > p.tree.level(t))
      s.violation("lift longer than level", p.tree.level(t).str());
  });

  // glue
  auto* c_glue = app.add_subcommand("glue", "Glue fragments along a shape");
  c_glue->require_subcommand(1);
  auto* c_star = c_glue->add_subcommand("star", "Glue a base and boundary fragments with connectors");
  c_star->add_option("spec", file, "Glue description file (JSON)")->required();
  c_star->add_option("--out", out_path, "Write the glued fragment here");
  on(c_star, [&] {
    const GlueSpec g = glue_spec_from_json(s.load(file), std::filesystem::path(file).parent_path());
    try {
      const GlueResult r = star_construct(g);
      payload = {{"nodes", r.model.size()}};
      place_fragment(payload, r.model, out_path);
      s.violations(validate(r.model));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AxiomViolated) throw;
      s.violation("AxiomViolated", e.message());
    }
  });

  // demo
  DemoOpts demo;
  auto* c_demo = app.add_subcommand("demo", "Build a witness model and its control, then search both");
  c_demo->add_option("case", demo.which, "case1, case2, case3 or inacc")->required();
  c_demo->add_option("--theta-bound", demo.params.theta_bound, "Constants per sort")->check(CLI::PositiveNumber);
  c_demo->add_option("--block-ends", demo.params.block_ends, "Block ends of the singular base")->delimiter(',');
  c_demo->add_option("--binary-depth", demo.params.binary_depth, "Depth of the binary sample")
      ->check(CLI::PositiveNumber);
  c_demo->add_option("--limbs", demo.params.limbs, "Limbs of the hard chain")->check(CLI::PositiveNumber);
  c_demo->add_option("--delta", demo.params.delta, "Homogeneity length of the hard chain")
      ->check(CLI::PositiveNumber);
  c_demo->add_option("--sub-witness", demo.params.sub_witness, "Size of the side models")
      ->check(CLI::PositiveNumber);
  c_demo->add_option("--L", demo.L, "Searched sequence length")->check(CLI::Range(2, 64));
  c_demo->add_option("--k", demo.k, "Closure rank")->check(CLI::NonNegativeNumber);
  c_demo->add_option("--r", demo.r, "Tuple arity")->check(CLI::PositiveNumber);
  c_demo->add_option("--out", demo.out, "Write the witness fragment here");
  on(c_demo, [&] {
    const WitnessCase wc = parse_witness_case(demo.which);
    struct Side {
      WitnessModel model;
      json summary;
      std::optional<Window> found;
      std::vector<Violation> bad;
    };
    const auto sides = parallel_map<Side>(2, s.g.workers, [&](int i) {
      WitnessParams p = demo.params;
      p.control = i == 1;
      Side side{build_witness(wc, p), {}, {}, {}};
      side.summary = demo_side(side.model, demo, s.g.budget_tuples, &side.found, &side.bad);
      return side;
    });
    payload = {{"case", witness_case_name(wc)}, {"witness", sides[0].summary}, {"control", sides[1].summary}};
    if (!demo.out.empty()) {
      write_file(demo.out, fragment_to_json(sides[0].model.model));
      payload["written"] = demo.out;
    }
    s.violations(sides[0].bad, "witness: ");
    s.violations(sides[1].bad, "control: ");
    if (sides[0].found) s.violation("witness has an indiscernible sequence");
    if (!sides[1].found) s.violation("control has no indiscernible sequence");
  });

  std::vector<std::string> argv_store{"twb"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  const auto start = std::chrono::steady_clock::now();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  s.report.params = {{"seed", s.g.seed},
                     {"budget_nodes", s.g.budget_nodes},
                     {"budget_tuples", s.g.budget_tuples},
                     {"workers", s.g.workers}};
  try {
    action();
    s.report.exit_status = s.report.violations.empty() ? 0 : 1;
  } catch (const Error& e) {
    s.report.payload = nullptr;
    s.report.violations.clear();
    s.report.error = e.what();
    s.report.exit_status = 2;
    err << "twb: " << e.what() << "\n";
  }
  s.report.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out << emit_report(s.report, s.g.format == "json" ? Format::json : Format::text);
  return s.report.exit_status;
}

}  // namespace twb::cli
