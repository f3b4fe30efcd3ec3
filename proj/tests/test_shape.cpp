#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "twb/error.hpp"
#include "twb/shape.hpp"

using twb::Shape;
using twb::ShapeSpec;

namespace {

bool mentions(const std::vector<std::string>& report, const std::string& word) {
  return std::any_of(report.begin(), report.end(), [&](const auto& s) { return s.find(word) != std::string::npos; });
}

TEST(Shape, ValidateExamples) {
  EXPECT_TRUE(twb::validate_shape(ShapeSpec{{"r"}, {}, {}}).empty());
  EXPECT_TRUE(mentions(twb::validate_shape(ShapeSpec{{"a", "b"}, {}, {}}), "multiple roots"));
  EXPECT_TRUE(mentions(twb::validate_shape(ShapeSpec{{"r", "a", "b"}, {{"a", "b"}, {"b", "a"}}, {}}), "cycle"));
  EXPECT_TRUE(mentions(twb::validate_shape(ShapeSpec{{"a", "a"}, {}, {}}), "duplicate"));
  EXPECT_THROW(Shape::build(ShapeSpec{{"a", "b"}, {}, {}}), twb::Error);
}

TEST(Shape, Decompose) {
  ShapeSpec v{{"r", "a", "b"}, {{"a", "r"}, {"b", "r"}}, {}};
  auto [root, comps] = Shape::build(v).decompose();
  EXPECT_EQ(root, 0);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 1);
  EXPECT_EQ(comps[1].size(), 1);
  EXPECT_TRUE(Shape::single().decompose().second.empty());
  auto chain = Shape::chain(3).decompose().second;
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0].size(), 2);
}

TEST(Shape, RankAndBranches) {
  const Shape c = Shape::chain(5);
  EXPECT_EQ(c.r_of(0), 1);
  EXPECT_EQ(c.r_of(1), 2);
  EXPECT_EQ(c.r_of(3), 4);
  EXPECT_EQ(c.longest_branch(), 5);
  EXPECT_EQ(Shape::single().longest_branch(), 1);
  const Shape b = Shape::binary(2);
  EXPECT_EQ(b.size(), 7);
  EXPECT_EQ(b.longest_branch(), 3);
  try {
    (void)c.index_of("nope");
    FAIL();
  } catch (const twb::Error& e) {
    EXPECT_EQ(e.kind(), twb::ErrorKind::UnknownIndex);
  }
}

TEST(ShapeProperty, DecomposePartitionsIndices) {
  for (int depth = 0; depth <= 4; ++depth) {
    for (const Shape& s : {Shape::binary(depth), Shape::chain(depth + 1)}) {
      auto comps = s.component_indices();
      std::set<int> seen;
      for (const auto& c : comps) {
        for (int i : c) EXPECT_TRUE(seen.insert(i).second);
      }
      EXPECT_EQ(static_cast<int>(seen.size()), s.size() - 1);
      EXPECT_FALSE(seen.count(s.root()));
      int best = 0;
      for (int i = 0; i < s.size(); ++i) best = std::max(best, s.r_of(i));
      EXPECT_EQ(best, s.longest_branch());
      EXPECT_EQ(Shape::build(s.spec()), s);
    }
  }
}

}  // namespace
