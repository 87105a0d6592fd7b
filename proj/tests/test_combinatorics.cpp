#include <gtest/gtest.h>

#include <cmath>

#include "jackflow/combinatorics.hpp"

using namespace jackflow;

TEST(Partition, TrimsTrailingZerosAndValidates) {
  Partition p({3, 1, 0, 0});
  EXPECT_EQ(p.length(), 2u);
  EXPECT_EQ(p.size(), 4);
  EXPECT_THROW(Partition({1, 2}), std::invalid_argument);
  EXPECT_THROW(Partition({-1}), std::invalid_argument);
}

TEST(Partition, TransposeIsAnInvolution) {
  for (int m = 0; m <= 8; ++m)
    for (const auto& p : partitions_of(m, m)) EXPECT_EQ(p.transpose().transpose(), p);
  EXPECT_EQ((Partition{3, 1, 1}).transpose(), (Partition{3, 1, 1}));
  EXPECT_EQ((Partition{4, 2}).transpose(), (Partition{2, 2, 1, 1}));
}

TEST(ArmLeg, WorkedExamples) {
  EXPECT_EQ(arm_leg(Partition{2, 1}, {1, 1}), (ArmLeg{1, 1, 0, 0}));
  EXPECT_EQ(arm_leg(Partition{1}, {1, 1}), (ArmLeg{0, 0, 0, 0}));
  EXPECT_EQ(arm_leg(Partition{3, 1, 1}, {1, 2}), (ArmLeg{1, 0, 1, 0}));
  EXPECT_THROW(arm_leg(Partition{2, 1}, {2, 2}), CellError);
}

TEST(AddableCells, WorkedExamples) {
  EXPECT_EQ(addable_cells(Partition{}, 3), (std::vector<Cell>{{1, 1}}));
  EXPECT_EQ(addable_cells(Partition{2, 2}, 2), (std::vector<Cell>{{1, 3}}));
  EXPECT_EQ(addable_cells(Partition{3, 1}, 4), (std::vector<Cell>{{1, 4}, {2, 2}, {3, 1}}));
}

TEST(AddableCells, MatchesBruteForceIncrements) {
  for (int m = 0; m <= 7; ++m) {
    for (const auto& lam : partitions_of(m, 7)) {
      for (int max_rows = std::max<int>(1, static_cast<int>(lam.length())); max_rows <= 5; ++max_rows) {
        std::vector<Cell> expected;
        for (int i = 1; i <= max_rows; ++i) {
          auto rows = lam.padded(static_cast<std::size_t>(max_rows));
          ++rows[static_cast<std::size_t>(i - 1)];
          bool ok = true;
          for (std::size_t r = 1; r < rows.size(); ++r) ok = ok && rows[r - 1] >= rows[r];
          if (ok) expected.push_back({i, rows[static_cast<std::size_t>(i - 1)]});
        }
        EXPECT_EQ(addable_cells(lam, max_rows), expected);
      }
    }
  }
}

TEST(Interlaces, WorkedExamples) {
  EXPECT_TRUE(interlaces(Partition{}, Partition{1}));
  EXPECT_TRUE(interlaces(Partition{1}, Partition{1, 1}));
  EXPECT_FALSE(interlaces(Partition{2}, Partition{1, 1}));
}

TEST(Interlaces, AgreesWithBruteForceUpToEightBoxes) {
  std::vector<Partition> all;
  for (int m = 0; m <= 8; ++m)
    for (auto& p : partitions_of(m, 8)) all.push_back(p);
  for (const auto& lam : all) {
    for (const auto& mu : all) {
      if (mu.size() > lam.size()) continue;
      bool brute = true;
      for (std::size_t i = 1; i <= 9; ++i)
        brute = brute && lam.row(i) >= mu.row(i) && mu.row(i) >= lam.row(i + 1);
      ASSERT_EQ(interlaces(mu, lam), brute);
    }
    for (const auto& mu : interlacing_predecessors(lam)) EXPECT_TRUE(interlaces(mu, lam));
  }
}

TEST(Rescale, WorkedExamples) {
  EXPECT_EQ(rescale_level(Partition{}, ScalingParams(1.0, 0.0, 1.0), 2), (std::vector<double>{0, 0}));
  const auto y = rescale_level(Partition{3, 1}, ScalingParams(0.01, 0.02, 1.0), 2);
  EXPECT_NEAR(y[0], -0.1, 1e-12);
  EXPECT_NEAR(y[1], 0.1, 1e-12);
  const auto z = rescale_level(Partition{5}, ScalingParams(0.04, 0.2, 1.0), 1);
  EXPECT_NEAR(z[0], 0.0, 1e-12);
  EXPECT_THROW(rescale_level(Partition{1, 1}, ScalingParams(1, 0, 1), 1), std::invalid_argument);
}

TEST(Rescale, OutputIsSortedForEveryPartition) {
  const ScalingParams p(0.03, 0.7, 1.5);
  for (int m = 0; m <= 9; ++m)
    for (const auto& lam : partitions_of(m, 4))
      EXPECT_TRUE(WeylPoint{rescale_level(lam, p, 4)}.valid());
}

TEST(Serialization, PartitionAndArrayFormats) {
  EXPECT_EQ(parse_partition("3,1,1"), (Partition{3, 1, 1}));
  EXPECT_EQ(format_partition(Partition{3, 1, 1}), "3,1,1");
  EXPECT_EQ(parse_partition(""), Partition{});
  EXPECT_EQ(parse_partition("0"), Partition{});
  const auto arr = parse_array("1;2,0;2,1,0");
  EXPECT_EQ(arr.depth(), 3);
  EXPECT_EQ(arr.level(3), (Partition{2, 1}));
  EXPECT_EQ(format_array(arr), "1;2,0;2,1,0");
  EXPECT_THROW(parse_array("2;1,1"), std::invalid_argument);
  EXPECT_THROW(parse_partition("3,x"), std::invalid_argument);
}

TEST(ConePoint, ValidityAndFlatten) {
  ConePoint p{{{0.0}, {-1.0, 1.0}}};
  EXPECT_TRUE(p.valid());
  EXPECT_TRUE(p.interior());
  ConePoint bad{{{2.0}, {-1.0, 1.0}}};
  EXPECT_FALSE(bad.valid());
  EXPECT_EQ(ConePoint::unflatten(2, p.flatten()).levels, p.levels);
}

TEST(InterlacingArray, RescaledArraysLieInTheCone) {
  const auto arr = parse_array("3;4,1;5,2,0");
  EXPECT_TRUE(rescale_array(arr, ScalingParams(0.01, 0.03, 1.0)).valid());
}
