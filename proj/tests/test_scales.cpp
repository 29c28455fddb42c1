#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pirkit/scales.hpp"

namespace pirkit {
namespace {

TEST(GradeToUnit, Endpoints) {
  EXPECT_DOUBLE_EQ(grade_to_unit(1), 1.0);
  EXPECT_DOUBLE_EQ(grade_to_unit(6), 0.0);
}

TEST(GradeToUnit, LinearSteps) {
  EXPECT_DOUBLE_EQ(grade_to_unit(4), 0.4);
  EXPECT_DOUBLE_EQ(grade_to_unit(2), 0.8);
}

TEST(GradeToUnit, RejectsOutOfRange) {
  EXPECT_THROW(grade_to_unit(0), Error);
  EXPECT_THROW(grade_to_unit(7), Error);
}

TEST(Conflate, BinaryThree) {
  EXPECT_EQ(conflate(3, RelevanceScale::R2_3), 1.0);
  EXPECT_EQ(conflate(4, RelevanceScale::R2_3), 0.0);
}

TEST(Conflate, BinaryFiveAndOne) {
  EXPECT_EQ(conflate(5, RelevanceScale::R2_5), 1.0);
  EXPECT_EQ(conflate(2, RelevanceScale::R2_1), 0.0);
  EXPECT_EQ(conflate(1, RelevanceScale::R2_1), 1.0);
  EXPECT_EQ(conflate(6, RelevanceScale::R2_5), 0.0);
}

TEST(Conflate, TernaryMiddle) {
  EXPECT_EQ(conflate(3, RelevanceScale::R3_1), 0.5);
  EXPECT_EQ(conflate(1, RelevanceScale::R3_1), 1.0);
  EXPECT_EQ(conflate(6, RelevanceScale::R3_1), 0.0);
  EXPECT_EQ(conflate(2, RelevanceScale::R3_2), 1.0);
  EXPECT_EQ(conflate(4, RelevanceScale::R3_2), 0.5);
  EXPECT_EQ(conflate(5, RelevanceScale::R3_2), 0.0);
}

TEST(Conflate, SixPointDelegatesAndAllMonotone) {
  for (RelevanceScale s : kAllScales) {
    for (int g = 1; g <= 6; ++g) {
      if (s == RelevanceScale::SixPoint) {
        EXPECT_EQ(conflate(g, s), grade_to_unit(g));
      }
      if (g > 1) {
        EXPECT_LE(conflate(g, s), conflate(g - 1, s)) << to_string(s) << " grade " << g;
      }
    }
  }
}

TEST(Conflate, RejectsOutOfRange) {
  EXPECT_THROW(conflate(7, RelevanceScale::R2_3), Error);
  EXPECT_THROW(conflate(0, RelevanceScale::SixPoint), Error);
}

TEST(Scale, NamesRoundTrip) {
  for (RelevanceScale s : kAllScales) EXPECT_EQ(parse_scale(to_string(s)), s);
  EXPECT_THROW(parse_scale("r4-2"), Error);
}

TEST(Discount, LogTwoAtTenTwentyFour) {
  EXPECT_NEAR(discount_weight(DiscountFunction(DiscountKind::Log2), 1024), 0.1, 1e-15);
}

TEST(Discount, SquareAtThree) {
  EXPECT_DOUBLE_EQ(discount_weight(DiscountFunction(DiscountKind::Square), 3), 1.0 / 9.0);
}

TEST(Discount, NoneIsOne) {
  EXPECT_EQ(discount_weight(DiscountFunction(DiscountKind::None), 7), 1.0);
}

TEST(Discount, LogFiveFlatPrefixAndSquare) {
  const DiscountFunction log5(DiscountKind::Log5);
  for (int r = 1; r <= 5; ++r) EXPECT_DOUBLE_EQ(log5.weight(r), 1.0) << r;
  EXPECT_NEAR(log5.weight(25), 0.5, 1e-12);
}

TEST(Discount, RootAndRank) {
  EXPECT_DOUBLE_EQ(DiscountFunction(DiscountKind::Root).weight(4), 0.5);
  EXPECT_DOUBLE_EQ(DiscountFunction(DiscountKind::Rank).weight(4), 0.25);
}

TEST(Discount, RankOneIsOneForEveryKind) {
  for (DiscountKind k : kAllDiscounts) EXPECT_EQ(DiscountFunction(k).weight(1), 1.0) << to_string(k);
}

TEST(Discount, AnalyticKindsNonIncreasing) {
  for (DiscountKind k : kAllDiscounts) {
    if (k == DiscountKind::ClickBased) continue;
    const DiscountFunction f(k);
    for (int r = 2; r <= 50; ++r) EXPECT_LE(f.weight(r), f.weight(r - 1)) << to_string(k) << r;
  }
}

TEST(Discount, PointwiseOrdering) {
  // Root and log2 cross at rank 4, so the ordering is two chains.
  const std::vector<std::vector<DiscountKind>> chains = {
      {DiscountKind::Square, DiscountKind::Rank, DiscountKind::Root, DiscountKind::None},
      {DiscountKind::Rank, DiscountKind::Log2, DiscountKind::Log5, DiscountKind::None}};
  for (const auto& order : chains) {
    for (int r = 2; r <= 50; ++r) {
      for (std::size_t i = 1; i < order.size(); ++i) {
        EXPECT_LE(DiscountFunction(order[i - 1]).weight(r),
                  DiscountFunction(order[i]).weight(r) + 1e-15)
            << to_string(order[i - 1]) << " vs " << to_string(order[i]) << " at " << r;
      }
    }
  }
}

TEST(Discount, RejectsRankZero) {
  EXPECT_THROW(DiscountFunction(DiscountKind::Rank).weight(0), Error);
}

TEST(ClickWeights, ExampleIsNonMonotoneAndAccepted) {
  const auto table = ClickWeights::example();
  EXPECT_GE(table.size(), 10u);
  EXPECT_EQ(table.at(1), 1.0);
  EXPECT_GT(table.at(3), table.at(2));
  const DiscountFunction f(DiscountKind::ClickBased);
  EXPECT_EQ(f.weight(3), table.at(3));
}

TEST(ClickWeights, RankOutsideTableIsError) {
  const auto f = DiscountFunction::click_based(ClickWeights({1.0, 0.5, 0.25}));
  EXPECT_DOUBLE_EQ(f.weight(3), 0.25);
  EXPECT_THROW(f.weight(4), Error);
}

TEST(ClickWeights, RejectsInvalidTables) {
  EXPECT_THROW(ClickWeights({0.9, 0.5}), Error);
  EXPECT_THROW(ClickWeights({1.0, 0.0}), Error);
  EXPECT_THROW(ClickWeights({1.0, 1.5}), Error);
  EXPECT_THROW(ClickWeights(std::vector<double>{}), Error);
}

TEST(ClickWeights, ParsesTwoColumnTable) {
  std::istringstream in("# rank weight\n1 1.0\n2 0.3\n\n3 0.4\n");
  const auto table = ClickWeights::parse(in, "inline");
  ASSERT_EQ(table.size(), 3u);
  EXPECT_DOUBLE_EQ(table.at(3), 0.4);
}

TEST(ClickWeights, ParseRejectsGapsAndGarbage) {
  std::istringstream gap("1 1.0\n3 0.5\n");
  EXPECT_THROW(ClickWeights::parse(gap), Error);
  std::istringstream garbage("1 one\n");
  EXPECT_THROW(ClickWeights::parse(garbage), Error);
}

TEST(Discount, NamesRoundTrip) {
  for (DiscountKind k : kAllDiscounts) EXPECT_EQ(parse_discount(to_string(k)), k);
  EXPECT_THROW(parse_discount("log10"), Error);
}

}  // namespace
}  // namespace pirkit
