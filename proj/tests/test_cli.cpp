#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "report.hpp"
#include "twb/experiments.hpp"
#include "twb/glue.hpp"
#include "twb/indis.hpp"
#include "twb/io.hpp"
#include "twb/qe.hpp"
#include "twb/samples.hpp"
#include "twb/types.hpp"

using namespace twb;
using nlohmann::json;

namespace {

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome twb_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.status = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Outcome twb_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  return twb_run(std::move(args));
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("twb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::filesystem::path dir_;
};

// Classes of single nodes under pairwise equivalence over A, by explicit
// isomorphism search rather than canonical codes.
std::uint64_t pairwise_classes(const Fragment& f, const std::vector<Node>& A, int k) {
  std::vector<Node> reps;
  for (Node x = 0; x < f.size(); ++x) {
    bool seen = false;
    for (Node r : reps) {
      if (equiv_over(f, {x}, {r}, A, k)) {
        seen = true;
        break;
      }
    }
    if (!seen) reps.push_back(x);
  }
  return reps.size();
}

TEST_F(CliFiles, ValidateMinimalFragment) {
  const auto f = write("f.json", R"({"nodes": [{"id": "a", "sort": "r"}, {"id": "b", "sort": "r", "level": "1"}],
                                     "order": [["a", "b"]]})");
  const Outcome text = twb_run({"validate", f});
  EXPECT_EQ(text.status, 0);
  EXPECT_NE(text.out.find("OK"), std::string::npos);
  const Outcome j = twb_json({"validate", f});
  EXPECT_EQ(j.status, 0);
  EXPECT_TRUE(j.report()["violations"].empty());
  EXPECT_EQ(j.report()["payload"]["nodes"], 2);
}

TEST_F(CliFiles, ViolationsExitWithOne) {
  // A meet declared at the wrong node.
  const auto f = write("f.json", R"({"nodes": [{"id": "a", "sort": "r"}, {"id": "b", "sort": "r", "level": "1"},
                                                {"id": "c", "sort": "r", "level": "1"}],
                                     "order": [["a", "b"], ["a", "c"]], "meet": [["b", "c", "b"]]})");
  const Outcome r = twb_json({"validate", f});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(r.report()["violations"].empty());
  EXPECT_EQ(twb_run({"validate", f}).out.find("\nOK"), std::string::npos);
}

TEST_F(CliFiles, InputErrorsNameTheLocation) {
  const Outcome bad = twb_json({"validate", write("bad.json", R"({"nodes": [{"id": "a", "level": "w^"}]})")});
  EXPECT_EQ(bad.status, 2);
  const std::string e = bad.report()["error"];
  EXPECT_NE(e.find("nodes[0].level"), std::string::npos) << e;
  EXPECT_NE(e.find("w^"), std::string::npos) << e;

  const Outcome dangling =
      twb_json({"validate", write("d.json", R"({"nodes": [{"id": "a"}], "order": [["a", "zz"]]})")});
  EXPECT_EQ(dangling.status, 2);
  EXPECT_NE(dangling.report()["error"].get<std::string>().find("'zz'"), std::string::npos);

  EXPECT_EQ(twb_run({"validate", (dir_ / "missing.json").string()}).status, 2);
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(twb_run({}).status, 2);
  EXPECT_EQ(twb_run({"frobnicate"}).status, 2);
  EXPECT_EQ(twb_run({"validate"}).status, 2);
  EXPECT_EQ(twb_run({"--format", "yaml", "demo", "case1"}).status, 2);
  EXPECT_EQ(twb_run({"--workers", "0", "demo", "case1"}).status, 2);
  const Outcome help = twb_run({"--help"});
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.out.find("demo"), std::string::npos);
}

TEST_F(CliFiles, SearchOnConstantsWitnessFindsNothing) {
  const auto w = build_witness(WitnessCase::theta);
  const auto f = write("w.json", fragment_to_json(w.model));
  const Outcome r = twb_json({"indis", "search", f, "--L", "4", "--k", "1"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(r.report()["payload"].is_null());
  EXPECT_NE(twb_run({"indis", "search", f, "--L", "4", "--k", "1"}).out.find("OK"), std::string::npos);
}

TEST(Cli, VcDegreeOnChainsIsStable) {
  const Outcome r = twb_json({"--workers", "3", "types", "vc-degree", "--family", "chain"});
  ASSERT_EQ(r.status, 0) << r.out;
  const json p = r.report()["payload"];
  EXPECT_EQ(p["degree_k0"], p["degree_k1"]);
  EXPECT_EQ(p["degree_k1"], p["degree_k2"]);
  EXPECT_TRUE(p["stable"].get<bool>());

  // Each series point against an isomorphism-search count; the rank-0 count
  // of the chain with m spread parameters is also 2m + 2 by hand: the root,
  // the segment below the first parameter, the parameters, the m - 1 gaps and
  // the segment above the last one.
  for (int k = 0; k <= 2; ++k) {
    CountSeries oracle;
    const json& series = p["series"]["k" + std::to_string(k)];
    ASSERT_EQ(series.size(), 8u);
    for (int m = 1; m <= 8; ++m) {
      const auto inst = vc_instance(VcFamily::chain, m);
      const auto count = pairwise_classes(inst.fragment, inst.params, k);
      if (k == 0) EXPECT_EQ(count, static_cast<std::uint64_t>(2 * m + 2));
      EXPECT_EQ(series[static_cast<std::size_t>(m - 1)][1].get<std::uint64_t>(), count) << "k=" << k << " m=" << m;
      oracle.emplace_back(m, count);
    }
    EXPECT_EQ(p["degree_k" + std::to_string(k)].get<int>(), estimate_degree(oracle));
  }
}

TEST_F(CliFiles, JsonReportRoundTripsAndIsDeterministic) {
  const auto f = write("h.json", fragment_to_json(h_iteration_sample()));
  const std::vector<std::string> cmd{"indis", "h-iter", f, "--seq", "s0,s1,s2,s3,s4"};
  const Outcome a = twb_json(cmd);
  const Outcome b = twb_json(cmd);
  ASSERT_EQ(a.status, 0) << a.out;
  const cli::RunReport ra = cli::report_from_json(a.report());
  EXPECT_EQ(cli::report_to_json(ra), a.report());
  EXPECT_EQ(cli::report_to_json(ra, false), cli::report_to_json(cli::report_from_json(b.report()), false));
  EXPECT_EQ(a.report()["inputs"][0]["digest"], cli::fnv1a64(read_text_file(f)));
  EXPECT_EQ(a.report()["payload"]["stop"], "fan");
}

TEST(Cli, WorkerCountDoesNotChangeResults) {
  auto payload = [](const std::string& workers, std::vector<std::string> cmd) {
    cmd.insert(cmd.begin(), {"--workers", workers});
    return twb_json(cmd).report()["payload"];
  };
  const std::vector<std::string> ramsey{"ramsey", "homog", "--all-pairs", "5", "--delta", "3"};
  EXPECT_EQ(payload("1", ramsey), payload("4", ramsey));
  const std::vector<std::string> vc{"types", "vc-degree", "--family", "binary"};
  EXPECT_EQ(payload("1", vc), payload("3", vc));
}

TEST(Cli, EmitTextMarksStatus) {
  cli::RunReport r;
  r.command = {"twb", "validate", "x.json"};
  EXPECT_NE(cli::emit_report(r, cli::Format::text).find("OK"), std::string::npos);
  r.violations.push_back({"meet", "wrong"});
  r.exit_status = 1;
  const std::string text = cli::emit_report(r, cli::Format::text);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("meet: wrong"), std::string::npos);
  EXPECT_EQ(cli::report_from_json(json::parse(cli::emit_report(r, cli::Format::json))), r);
}

TEST_F(CliFiles, PayloadsMirrorTheLibrary) {
  const Fragment h = h_iteration_sample();
  const auto f = write("h.json", fragment_to_json(h));
  const auto seq = h_iteration_window(h);

  const Outcome cls = twb_json({"indis", "classify", f, "--seq", "s0,s1,s2,s3,s4"});
  EXPECT_EQ(cls.report()["payload"]["pattern"], pattern_name(classify(h, seq).pattern));

  const Outcome m2r = twb_json({"qe", "m2", "--m1", "1", "--k", "2", "--shape", "binary:1"});
  EXPECT_EQ(m2r.report()["payload"]["m2"].get<std::uint64_t>(), m2(1, 2, Shape::binary(1)));
  EXPECT_EQ(twb_json({"qe", "m2", "--m1", "3", "--shape", "single"}).report()["payload"]["m2"], 7);

  const auto chain = vc_instance(VcFamily::chain, 2);
  const auto cf = write("chain.json", fragment_to_json(chain.fragment));
  const Outcome cnt = twb_json({"types", "count", cf, "--params", "n4,n12", "--k", "1", "--n", "1"});
  EXPECT_EQ(cnt.report()["payload"]["count"].get<std::uint64_t>(),
            count_type_classes(chain.fragment, chain.params, 1, 1));

  const Outcome chk = twb_json({"indis", "check", f, "--seq", "s0,s1,s2,s3", "--k", "1", "--r", "2"});
  EXPECT_EQ(chk.report()["payload"]["holds"].get<bool>(),
            is_indiscernible(h, {{seq[0], seq[1], seq[2], seq[3]}, 1, 2, 1}));
}

TEST_F(CliFiles, CompleteWritesAValidFragment) {
  const auto f = write("c.json", R"({"nodes": [{"id": "a", "sort": "r"}, {"id": "b", "sort": "r", "level": "3"},
                                                {"id": "c", "sort": "r", "level": "w+2"}],
                                     "order": [["a", "b"], ["b", "c"]]})");
  const auto out = (dir_ / "done.json").string();
  const Outcome r = twb_json({"complete", f, "--rank", "1", "--out", out});
  ASSERT_EQ(r.status, 0) << r.out;
  const Fragment done = fragment_from_json(read_text_file(out));
  EXPECT_TRUE(validate(done).empty());
  EXPECT_EQ(r.report()["payload"]["nodes"], done.size());
  EXPECT_EQ(twb_json({"validate", out}).status, 0);
}

TEST_F(CliFiles, QeExtendVerifiesItsOutput) {
  const auto f = write("c.json", R"({"nodes": [{"id": "a", "sort": "r"}, {"id": "b", "sort": "r", "level": "3"},
                                                {"id": "c", "sort": "r", "level": "5"}],
                                     "order": [["a", "b"], ["b", "c"]]})");
  const auto closed = (dir_ / "closed.json").string();
  ASSERT_EQ(twb_json({"complete", f, "--rank", "3", "--out", closed}).status, 0);
  const Outcome r = twb_json({"qe", "extend", "--from", closed, "--a", "a,c", "--c", "b", "--to", closed, "--b", "a,c",
                          "--m1", "1"});
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(r.report()["payload"]["verified"].get<bool>());
  EXPECT_EQ(r.report()["payload"]["d"], "b");
}

TEST_F(CliFiles, QeTableOverChains) {
  const auto phi = write("phi.json", R"({"and": [{"less": [{"var": 1, "sort": "r"}, {"var": 0, "sort": "r"}]},
                                                  {"less": [{"var": 0, "sort": "r"}, {"var": 2, "sort": "r"}]}]})");
  const auto c = write("c.json", R"({"nodes": [{"id": "a", "sort": "r"}, {"id": "b", "sort": "r", "level": "1"},
                                                {"id": "c", "sort": "r", "level": "4"}],
                                     "order": [["a", "b"], ["b", "c"]]})");
  const auto closed = (dir_ / "closed.json").string();
  ASSERT_EQ(twb_json({"complete", c, "--rank", "1", "--out", closed}).status, 0);
  const Outcome r = twb_json({"qe", "table", "--formula", phi, "--witness-sort", "r", "--m", "3", closed});
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.report()["payload"]["arity"], 2);
  EXPECT_FALSE(r.report()["payload"]["positive"].empty());
  EXPECT_FALSE(r.report()["payload"]["negative"].empty());
  EXPECT_TRUE(r.report()["payload"]["conflicting"].empty());
  EXPECT_EQ(twb_json({"qe", "table", "--formula", write("bad.json", R"({"eq": [{"var": 0, "sort": "q"}]})"),
                      "--witness-sort", "r", closed})
                .status,
            2);
}

TEST_F(CliFiles, PspaceCommands) {
  const auto p = write("p.json", ptriple_to_json(hard6_sample()));
  EXPECT_EQ(twb_json({"pspace", "validate", p}).status, 0);
  const Outcome hard = twb_json({"pspace", "hard", p, "--delta", "4"});
  EXPECT_EQ(hard.status, 0);
  EXPECT_TRUE(hard.report()["payload"]["hard"].get<bool>());
  const Outcome q = twb_json({"pspace", "q-build", p, "--alpha-max", "2", "--colors", "2"});
  ASSERT_EQ(q.status, 0) << q.out;
  EXPECT_EQ(q.report()["payload"]["level_mismatches"], 0);
  const Outcome lift = twb_json({"pspace", "lift", p, "--node", "p3"});
  ASSERT_EQ(lift.status, 0) << lift.out;
  EXPECT_EQ(lift.report()["payload"]["eta"].back(), "p3");
}

TEST_F(CliFiles, RamseyCommands) {
  Coloring c;
  c.N = 5;
  c.arity = 2;
  // The pentagon coloring: no three points with one color.
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) c.table[{i, j}] = (j - i == 1 || j - i == 4) ? 1 : 0;
  }
  const Outcome none = twb_json({"ramsey", "homog", write("c5.json", coloring_to_json(c)), "--delta", "3"});
  EXPECT_EQ(none.status, 1);
  EXPECT_TRUE(none.report()["payload"].is_null());
  const Outcome six = twb_json({"ramsey", "homog", "--all-pairs", "6", "--delta", "3", "--workers", "4"});
  EXPECT_EQ(six.status, 0);
  EXPECT_EQ(six.report()["payload"]["colorings"], 1 << 15);
  const Outcome five = twb_json({"ramsey", "homog", "--all-pairs", "5", "--delta", "3"});
  EXPECT_EQ(five.status, 1);
  EXPECT_GT(five.report()["payload"]["without_homogeneous"].get<int>(), 0);
  const Outcome rnd1 = twb_json({"--seed", "9", "ramsey", "homog", "--all-pairs", "5", "--random", "50"});
  const Outcome rnd2 = twb_json({"--seed", "9", "ramsey", "homog", "--all-pairs", "5", "--random", "50"});
  EXPECT_EQ(rnd1.report()["payload"], rnd2.report()["payload"]);
}

TEST_F(CliFiles, GlueStar) {
  write("side.json", R"({"shape": {"ids": ["<>"]}, "nodes": [{"id": "m", "sort": "<>", "level": "0"},
                         {"id": "c0", "sort": "<>", "level": "1"}], "order": [["m", "c0"]], "meet_closed": true})");
  const std::string base = R"("base": {"shape": {"ids": ["<>"]}, "nodes": [{"id": "z", "sort": "<>"},
                              {"id": "s", "sort": "<>", "level": "1"}], "order": [["z", "s"]], "meet_closed": true})";
  const auto spec = write("spec.json", R"({"shape": {"ids": ["<>", "<0>"], "parent": {"<0>": "<>"}}, "inner": ["<>"],)" +
                                           base + R"(, "boundary": {"<0>": "side.json"},
                                           "connectors": {"<0>": {"s": "c0"}}})");
  const Outcome r = twb_json({"glue", "star", spec});
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.report()["payload"]["nodes"], 4);
  EXPECT_EQ(r.report()["inputs"].size(), 1u);
}

TEST(Cli, DemosSeparateWitnessFromControl) {
  for (const char* c : {"case1", "case2", "case3", "inacc"}) {
    const Outcome r = twb_json({"--workers", "2", "demo", c});
    EXPECT_EQ(r.status, 0) << r.out;
    const json p = r.report()["payload"];
    EXPECT_TRUE(p["witness"]["indiscernible"].is_null()) << c;
    EXPECT_FALSE(p["control"]["indiscernible"].is_null()) << c;
    EXPECT_EQ(p["witness"]["nodes"], p["control"]["nodes"]) << c;
  }
  EXPECT_EQ(twb_json({"demo", "case2", "--theta-bound", "4"}).status, 2);
  EXPECT_EQ(twb_json({"demo", "case9"}).status, 2);
}

}  // namespace
