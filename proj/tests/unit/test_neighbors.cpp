#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "alloyscope/error.hpp"
#include "alloyscope/neighbors.hpp"
#include "alloyscope/synthetic.hpp"
#include "oracles.hpp"

namespace alloyscope {
namespace {

TargetVector random_target(const Dataset& ds, Rng& rng, std::size_t dims) {
  TargetVector t;
  for (std::size_t c = 0; c < dims; ++c) {
    const auto& name = ds.column(c).name;
    const double lo = oracle::column_min(ds, name);
    const double hi = oracle::column_max(ds, name);
    t.entries[name] = lo + (hi - lo) * rng.uniform(-0.2, 1.2);
  }
  return t;
}

TEST(TargetFromBounds, Midpoints) {
  EXPECT_EQ(target_from_bounds(BoundsSpec{{{"YS", {200.0, 400.0}}}}).entries.at("YS"), 300.0);
  EXPECT_EQ(target_from_bounds(BoundsSpec{{{"delta_T", {0.0, 100.0}}}}).entries.at("delta_T"),
            50.0);
  const auto two = target_from_bounds(BoundsSpec{{{"YS", {200.0, 400.0}}, {"density", {2.0, 3.0}}}});
  EXPECT_EQ(two.entries.size(), 2u);
  EXPECT_EQ(two.entries.at("density"), 2.5);
}

TEST(TargetFromBounds, EmptyBoundsThrow) {
  try {
    target_from_bounds({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBounds);
  }
}

TEST(Distance, Examples) {
  const std::vector<double> a{0.1, 0.7};
  EXPECT_EQ(distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(distance(std::vector<double>{0.2}, std::vector<double>{0.5}), 0.3);
  EXPECT_DOUBLE_EQ(distance(std::vector<double>{0.0, 0.0}, std::vector<double>{0.3, 0.4}), 0.5);
  EXPECT_THROW(distance(std::vector<double>{0.0}, a), Error);
}

TEST(TopK, ExistingRowIsRankOne) {
  const auto ds = oracle::random_dataset(500, 4, 2);
  const auto stats = compute_norm_stats(ds);
  const auto table = normalize(ds, stats);
  TargetVector t;
  for (std::size_t c = 0; c < 4; ++c) t.entries[ds.column(c).name] = ds.at(123, c);
  const auto ranking = top_k(table, stats, t, 5);
  ASSERT_EQ(ranking.entries.size(), 5u);
  EXPECT_EQ(ranking.entries[0].row, 123u);
  EXPECT_EQ(ranking.entries[0].distance, 0.0);
  EXPECT_EQ(ranking.entries[0].score, 1.0);
  EXPECT_EQ(ranking.entries.back().score, 0.0);
}

TEST(TopK, MatchesExhaustiveSortOnSynthetic) {
  const auto ds = synthesize_dataset(1000, 5);
  const auto stats = compute_norm_stats(ds);
  const auto table = normalize(ds, stats);
  TargetVector t{{{"YS", 300.0}, {"density", 2.68}, {"CSC", 0.4}}};
  const auto got = top_k(table, stats, t, 10);
  const auto want = oracle::exhaustive_top_k(ds, t, 10);
  ASSERT_EQ(got.entries.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got.entries[i].row, want[i].row);
    EXPECT_NEAR(got.entries[i].distance, want[i].distance, 1e-12);
  }
}

TEST(TopK, TiesBreakTowardLowerIndex) {
  Schema schema{{"a", ColumnGroup::Property, ""}};
  const Dataset ds(schema, {0.0, 1.0, 0.6, 0.4, 0.4}, {0, 1, 2, 3, 4});
  const auto stats = compute_norm_stats(ds);
  const auto ranking = top_k(normalize(ds, stats), stats, TargetVector{{{"a", 0.5}}}, 5);
  std::vector<std::size_t> rows;
  for (const auto& e : ranking.entries) rows.push_back(e.row);
  EXPECT_EQ(rows, (std::vector<std::size_t>{2, 3, 4, 0, 1}));
}

TEST(TopK, KSaturatesAtRowCount) {
  const auto ds = oracle::random_dataset(7, 2, 4);
  const auto stats = compute_norm_stats(ds);
  const auto ranking = top_k(normalize(ds, stats), stats, TargetVector{{{"c0", 0.5}}}, 100);
  EXPECT_EQ(ranking.entries.size(), 7u);
}

TEST(TopK, InvariantUnderColumnRescaling) {
  const auto base = oracle::random_dataset(800, 3, 9);
  std::vector<double> scaled(base.values().begin(), base.values().end());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = 1000.0 * scaled[i] - 40.0;
  const Dataset big(base.columns(), scaled,
                    {base.source_row_ids().begin(), base.source_row_ids().end()});
  TargetVector t{{{"c0", 0.3}, {"c2", 0.8}}};
  TargetVector t_big{{{"c0", 1000.0 * 0.3 - 40.0}, {"c2", 1000.0 * 0.8 - 40.0}}};
  const auto s1 = compute_norm_stats(base);
  const auto s2 = compute_norm_stats(big);
  const auto a = top_k(normalize(base, s1), s1, t, 25);
  const auto b = top_k(normalize(big, s2), s2, t_big, 25);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_EQ(a.entries[i].row, b.entries[i].row);
    EXPECT_NEAR(a.entries[i].distance, b.entries[i].distance, 1e-9);
  }
}

TEST(TopK, RandomTargetsAgreeWithOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const auto ds = oracle::random_dataset(2000, 5, 100 + trial);
    const auto stats = compute_norm_stats(ds);
    const auto table = normalize(ds, stats);
    const auto t = random_target(ds, rng, 3 + trial % 3);
    for (std::size_t k : {1u, 10u, 100u}) {
      const auto got = top_k(table, stats, t, k);
      const auto want = oracle::exhaustive_top_k(ds, t, k);
      ASSERT_EQ(got.entries.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        ASSERT_EQ(got.entries[i].row, want[i].row);
        ASSERT_NEAR(got.entries[i].distance, want[i].distance, 1e-12);
      }
    }
  }
}

TEST(TopK, ErrorPaths) {
  const auto ds = oracle::random_dataset(10, 2, 1);
  const auto stats = compute_norm_stats(ds);
  const auto table = normalize(ds, stats);
  auto code = [&](const TargetVector& t, std::size_t k) {
    try {
      top_k(table, stats, t, k);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadRequest;
  };
  EXPECT_EQ(code({}, 3), ErrorCode::EmptyTarget);
  EXPECT_EQ(code(TargetVector{{{"c0", 0.1}}}, 0), ErrorCode::InvalidK);
  EXPECT_EQ(code(TargetVector{{{"zz", 0.1}}}, 3), ErrorCode::UnknownColumn);
}

TEST(AssignScores, LinearFromOneToZeroAndAllEqual) {
  std::vector<Neighbor> e{{0, 1.0, 0}, {1, 2.0, 0}, {2, 3.0, 0}};
  assign_scores(e);
  EXPECT_EQ(e[0].score, 1.0);
  EXPECT_EQ(e[1].score, 0.5);
  EXPECT_EQ(e[2].score, 0.0);
  std::vector<Neighbor> flat{{0, 2.0, 0}, {1, 2.0, 0}};
  assign_scores(flat);
  EXPECT_EQ(flat[0].score, 1.0);
  EXPECT_EQ(flat[1].score, 1.0);
}

}  // namespace
}  // namespace alloyscope
