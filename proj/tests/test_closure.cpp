#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "twb/closure.hpp"
#include "twb/error.hpp"

using namespace twb;

namespace {

TEST(Closure, ChainExample) {
  Fragment f = testgen::chain_fragment(5);
  EXPECT_EQ(closure(f, {f.node("n2")}, ClosureVariant::zero), (std::vector<Node>{f.node("n0"), f.node("n2")}));
  const auto one = closure(f, {f.node("n2")}, ClosureVariant::k, 1);
  EXPECT_EQ(one, (std::vector<Node>{f.node("n0"), f.node("n1"), f.node("n2")}));
}

TEST(Closure, SingleOperators) {
  Fragment f = testgen::binary_fragment(2);
  const Node a = f.node("00"), b = f.node("01"), c = f.node("1");
  auto sorted = [](std::vector<Node> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(closure(f, {a, b}, ClosureVariant::wedge), sorted({f.node("0"), a, b}));
  EXPECT_EQ(closure(f, {a, c}, ClosureVariant::lim), sorted({f.node("e"), c, a}));
  EXPECT_EQ(closure(f, {f.node("e"), a}, ClosureVariant::suc), sorted({f.node("e"), f.node("0"), a}));
}

TEST(Closure, FixedPointIsItself) {
  Fragment f = testgen::binary_fragment(3);
  std::vector<Node> all;
  for (Node n = 0; n < f.size(); ++n) all.push_back(n);
  EXPECT_EQ(closure(f, all, ClosureVariant::k, 2), all);
}

TEST(Closure, MissingValueIsNotClosed) {
  Fragment f(Shape::single());
  f.add_node("x", 0, Ordinal::parse("w+1"));
  try {
    (void)closure(f, {0}, ClosureVariant::zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotClosed);
  }
}

TEST(ClosureProperty, MatchesTermOracleAndBound) {
  testgen::Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const Fragment base = testgen::random_fragment(rng, testgen::uniform(rng, 2, 20));
    const Fragment f = complete(base, {.rank = 2});
    const int m = testgen::uniform(rng, 0, 3);
    const auto A = testgen::sample(rng, base.size(), m);
    for (int k = 0; k <= 2; ++k) {
      const auto got = closure(f, A, ClosureVariant::k, k);
      const auto want = oracle::terms_up_to_rank(f, A, k);
      EXPECT_EQ(std::set<Node>(got.begin(), got.end()), want);
      EXPECT_LE(got.size(), closure_size_bound(f.shape(), 0, m, k));
      const auto zero = closure(f, A, ClosureVariant::zero);
      EXPECT_EQ(closure(f, zero, ClosureVariant::zero), zero);
      if (k > 0) {
        const auto prev = closure(f, A, ClosureVariant::k, k - 1);
        EXPECT_TRUE(std::includes(got.begin(), got.end(), prev.begin(), prev.end()));
      }
    }
  }
}

}  // namespace
