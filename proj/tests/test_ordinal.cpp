#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "twb/error.hpp"
#include "twb/ordinal.hpp"

using twb::Cmp;
using twb::Ordinal;

namespace {

Ordinal P(const char* s) { return Ordinal::parse(s); }

TEST(Ordinal, CompareExamples) {
  EXPECT_EQ(twb::cmp(Ordinal::nat(3), Ordinal::nat(3)), Cmp::equal);
  EXPECT_EQ(twb::cmp(P("w+1"), P("w*2")), Cmp::less);
  EXPECT_EQ(twb::cmp(P("w^2"), P("w*5+9")), Cmp::greater);
}

TEST(Ordinal, SuccessorPredecessor) {
  EXPECT_EQ(P("w").successor(), P("w+1"));
  EXPECT_EQ(P("w+1").predecessor(), P("w"));
  try {
    (void)P("w*2").predecessor();
    FAIL() << "expected NotASuccessor";
  } catch (const twb::Error& e) {
    EXPECT_EQ(e.kind(), twb::ErrorKind::NotASuccessor);
  }
  EXPECT_THROW((void)Ordinal().predecessor(), twb::Error);
}

TEST(Ordinal, LimbAndModOmega) {
  EXPECT_EQ(P("w+3").limb_level(), P("w"));
  EXPECT_EQ(P("5").limb_level(), Ordinal());
  EXPECT_EQ(P("w*2").limb_level(), P("w*2"));
  EXPECT_EQ(P("w+3").mod_omega(), 3u);
  EXPECT_EQ(P("7").mod_omega(), 7u);
  EXPECT_EQ(P("w^2").mod_omega(), 0u);
  EXPECT_TRUE(Ordinal().is_limit());
}

TEST(Ordinal, ParseAndFormat) {
  EXPECT_EQ(P("w^2*3+w*1+4").str(), "w^2*3+w+4");
  EXPECT_EQ(P("0").str(), "0");
  EXPECT_EQ(P("w^1*2"), P("w*2"));
  // Non-normal sums are read with ordinal addition.
  EXPECT_EQ(P("3+w"), P("w"));
  EXPECT_EQ(P("1+1"), P("2"));
  EXPECT_EQ(P("w^2+w^3"), P("w^3"));
  EXPECT_EQ(P("w+w+2"), P("w*2+2"));
  for (const char* bad : {"w^", "", "w+", "w*0", "x", "w**2", "w^2*"}) {
    try {
      (void)P(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const twb::Error& e) {
      EXPECT_EQ(e.kind(), twb::ErrorKind::InputError) << bad;
    }
  }
}

TEST(Ordinal, FiniteGap) {
  EXPECT_EQ(Ordinal::finite_gap(P("2"), P("5")), 3u);
  EXPECT_EQ(Ordinal::finite_gap(P("1"), P("w+1")), std::nullopt);
  EXPECT_EQ(Ordinal::finite_gap(P("w+1"), P("w+4")), 3u);
  EXPECT_EQ(Ordinal::finite_gap(P("5"), P("2")), std::nullopt);
}

Ordinal random_ordinal(twb::testgen::Rng& rng) {
  std::vector<Ordinal::Term> terms;
  int e = twb::testgen::uniform(rng, 0, 5);
  while (e >= 0) {
    if (twb::testgen::coin(rng, 0.6)) {
      terms.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint64_t>(twb::testgen::uniform(rng, 1, 1'000'000))});
    }
    e -= twb::testgen::uniform(rng, 1, 2);
  }
  return Ordinal::from_terms(terms);
}

TEST(OrdinalProperty, LawsOnRandomValues) {
  twb::testgen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Ordinal a = random_ordinal(rng);
    const Ordinal b = random_ordinal(rng);
    EXPECT_EQ(Ordinal::parse(a.str()), a);
    EXPECT_LE(a.limb_level(), a);
    EXPECT_EQ(a.limb_level().limb_level(), a.limb_level());
    EXPECT_EQ(a.limb_level().plus_nat(a.mod_omega()), a);
    EXPECT_EQ(a.successor().predecessor(), a);
    if (a.is_successor()) EXPECT_EQ(a.predecessor().successor(), a);
    const auto c = twb::cmp(a, b);
    const auto d = twb::cmp(b, a);
    EXPECT_EQ(c == Cmp::less, d == Cmp::greater);
    EXPECT_EQ(c == Cmp::equal, a == b);
    EXPECT_LT(a, a.successor());
  }
}

}  // namespace
