#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "alloyscope/error.hpp"
#include "alloyscope/filter.hpp"
#include "alloyscope/synthetic.hpp"
#include "oracles.hpp"

namespace alloyscope {
namespace {

Dataset single_column(std::vector<double> values) {
  std::vector<std::int64_t> ids(values.size());
  std::iota(ids.begin(), ids.end(), 0);
  return Dataset({{"YS", ColumnGroup::Property, "MPa"}}, std::move(values), std::move(ids));
}

TEST(Classify, EmptyBoundsMatchEverything) {
  const auto ds = synthesize_dataset(300, 1);
  const auto result = classify(ds, compute_norm_stats(ds), {});
  EXPECT_EQ(result.match_count, 300u);
  EXPECT_EQ(result.soft_count, 0u);
  EXPECT_TRUE(result.feasible());
}

TEST(Classify, FivePercentMarginBoundary) {
  // Range 0..100; bound [0, 50]; 54 is inside the margin, 56 outside.
  const auto ds = single_column({0.0, 54.0, 56.0, 100.0, 50.0});
  const BoundsSpec bounds{{{"YS", {0.0, 50.0}}}};
  const auto result = classify(ds, compute_norm_stats(ds), bounds, 0.05);
  EXPECT_EQ(result.labels[0], MatchLabel::Match);
  EXPECT_EQ(result.labels[1], MatchLabel::SoftMatch);
  EXPECT_EQ(result.labels[2], MatchLabel::NoMatch);
  EXPECT_EQ(result.labels[3], MatchLabel::NoMatch);
  EXPECT_EQ(result.labels[4], MatchLabel::Match);
  EXPECT_EQ(result.match_count, 2u);
  EXPECT_EQ(result.soft_count, 1u);
}

TEST(Classify, HeatExchangerBoundsAgreeWithPredicate) {
  const auto ds = synthesize_dataset(5000, 2);
  const auto stats = compute_norm_stats(ds);
  BoundsSpec bounds{{{"therm_conductivity", {150.0, stats.max[*stats.find("therm_conductivity")]}},
                     {"density", {stats.min[*stats.find("density")], 2.7}},
                     {"lin_thermal_exp", {20e-6, 26e-6}},
                     {"hardness", {60.0, 100.0}},
                     {"Si", {1.0, 12.0}}}};
  const auto result = classify(ds, stats, bounds);
  EXPECT_EQ(result.labels, oracle::predicate_labels(ds, bounds, 0.05));
  EXPECT_GT(result.match_count, 0u);
}

TEST(Classify, ToleranceZeroHasNoSoftMatches) {
  const auto ds = synthesize_dataset(2000, 3);
  const auto stats = compute_norm_stats(ds);
  const BoundsSpec bounds{{{"YS", {250.0, 300.0}}, {"Cu", {1.0, 4.0}}}};
  const auto strict = classify(ds, stats, bounds, 0.0);
  EXPECT_EQ(strict.soft_count, 0u);
  const auto loose = classify(ds, stats, bounds, 0.05);
  EXPECT_EQ(strict.match_count, loose.match_count);
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    if (strict.labels[r] == MatchLabel::Match) EXPECT_EQ(loose.labels[r], MatchLabel::Match);
  }
}

TEST(Classify, EmptyIntervalMatchesNothing) {
  const auto ds = synthesize_dataset(500, 4);
  const BoundsSpec bounds{{{"YS", {300.0, 250.0}}}};
  const auto result = classify(ds, compute_norm_stats(ds), bounds);
  EXPECT_EQ(result.match_count, 0u);
  EXPECT_EQ(result.soft_count, 0u);
  EXPECT_FALSE(result.feasible());
}

TEST(Classify, MonotoneUnderTightening) {
  const auto ds = synthesize_dataset(3000, 5);
  const auto stats = compute_norm_stats(ds);
  Rng rng(17);
  const std::vector<std::string> columns{"YS", "density", "Mg"};
  for (int trial = 0; trial < 30; ++trial) {
    auto wide = oracle::random_bounds(ds, stats, columns, rng);
    auto narrow = wide;
    for (auto& [name, iv] : narrow.entries) {
      if (iv.empty()) continue;
      const double w = iv.hi - iv.lo;
      iv.lo += w * rng.uniform(0.0, 0.4);
      iv.hi -= w * rng.uniform(0.0, 0.4);
    }
    const auto a = classify(ds, stats, wide);
    const auto b = classify(ds, stats, narrow);
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
      if (a.labels[r] == MatchLabel::NoMatch) ASSERT_NE(b.labels[r], MatchLabel::Match);
      if (b.labels[r] == MatchLabel::Match) ASSERT_EQ(a.labels[r], MatchLabel::Match);
    }
  }
}

TEST(Classify, LabelsFollowRowPermutation) {
  const auto ds = synthesize_dataset(1000, 6);
  const auto stats = compute_norm_stats(ds);
  std::vector<std::size_t> order(ds.row_count());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(3);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  const auto shuffled = ds.select_rows(order);
  const BoundsSpec bounds{{{"hardness", {75.0, 95.0}}, {"Zn", {0.5, 2.5}}}};
  const auto a = classify(ds, stats, bounds);
  const auto b = classify(shuffled, stats, bounds);
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(b.labels[i], a.labels[order[i]]);
}

TEST(Classify, ErrorPaths) {
  const auto ds = single_column({1.0, 2.0});
  const auto stats = compute_norm_stats(ds);
  try {
    classify(ds, stats, BoundsSpec{{{"CSC", {0.0, 1.0}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownColumn);
    EXPECT_EQ(e.detail(), "CSC");
  }
  try {
    classify(ds, stats, {}, -0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeTolerance);
  }
}

TEST(Intersect, OverlappingIntervalsShrink) {
  const BoundsSpec a{{{"YS", {200.0, 400.0}}}};
  const BoundsSpec b{{{"YS", {300.0, 500.0}}}};
  EXPECT_EQ(intersect(a, b), (BoundsSpec{{{"YS", {300.0, 400.0}}}}));
}

TEST(Intersect, DisjointKeysPassThrough) {
  const BoundsSpec a{{{"YS", {200.0, 400.0}}}};
  const BoundsSpec b{{{"density", {0.0, 2.75}}}};
  const auto c = intersect(a, b);
  EXPECT_EQ(c.entries.size(), 2u);
  EXPECT_EQ(c.entries.at("YS"), (Interval{200.0, 400.0}));
  EXPECT_EQ(c.entries.at("density"), (Interval{0.0, 2.75}));
}

TEST(Intersect, ContradictionYieldsEmptyIntervalAndNoMatches) {
  const auto c = intersect(BoundsSpec{{{"YS", {200.0, 250.0}}}},
                           BoundsSpec{{{"YS", {300.0, 400.0}}}});
  EXPECT_TRUE(c.entries.at("YS").empty());
  const auto ds = synthesize_dataset(1000, 1);
  EXPECT_EQ(classify(ds, compute_norm_stats(ds), c).match_count, 0u);
}

TEST(ValidateBounds, RejectsUnknownInvertedAndNonFinite) {
  const auto ds = single_column({1.0, 2.0});
  EXPECT_NO_THROW(validate_bounds(BoundsSpec{{{"YS", {0.0, 1.0}}}}, ds));
  auto code = [&](const BoundsSpec& b) {
    try {
      validate_bounds(b, ds);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadRequest;
  };
  EXPECT_EQ(code(BoundsSpec{{{"Si", {0.0, 1.0}}}}), ErrorCode::UnknownColumn);
  EXPECT_EQ(code(BoundsSpec{{{"YS", {2.0, 1.0}}}}), ErrorCode::InvalidBounds);
  EXPECT_EQ(code(BoundsSpec{{{"YS", {0.0, std::numeric_limits<double>::infinity()}}}}),
            ErrorCode::InvalidBounds);
}

}  // namespace
}  // namespace alloyscope
