#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cbextract/errors.hpp"
#include "cbextract/objective.hpp"
#include "oracles.hpp"

using namespace cbx;

TEST(EvaluateQ, EmptyScans) {
  const ScanSet scans(3);
  const std::vector<ImageObservation> images(3);
  const ObjectiveValue v = evaluate_q(RigidTransform{}, scans, images, 0.07);
  EXPECT_EQ(v.count, 0);
  ASSERT_EQ(v.per_point.size(), 3u);
  for (const auto& s : v.per_point) EXPECT_TRUE(s.empty());
}

TEST(EvaluateQ, RejectsBadInput) {
  EXPECT_THROW(Problem(ScanSet(2), std::vector<ImageObservation>(3), 0.07), ConfigError);
  EXPECT_THROW(Problem(ScanSet(1), std::vector<ImageObservation>(1), 0.0), ConfigError);
  ScanSet bad{{Vec3(std::nan(""), 0, 0)}};
  EXPECT_THROW(Problem(bad, std::vector<ImageObservation>(1), 0.07), ConfigError);
}

TEST(EvaluateQ, ImagesWithoutBoardsContributeNothing) {
  std::mt19937_64 rng(1);
  oracle::SmallScene s = oracle::random_small_scene(rng);
  s.images[1].boards.clear();
  const ObjectiveValue v = evaluate_q(s.gt, s.scans, s.images, 0.07);
  for (int l : v.per_point[1]) EXPECT_EQ(l, kOutlier);
}

TEST(EvaluateQ, MatchesLiteralObjective) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const int boards = 1 + n % 3;
    const oracle::SmallScene s = oracle::random_small_scene(rng, 3, 20, boards);
    for (int t = 0; t < 20; ++t) {
      RigidTransform T = s.gt;
      T.rot.v += Vec3(u(rng), u(rng), u(rng)) * 0.02 * (t % 4);
      T.t += Vec3(u(rng), u(rng), u(rng)) * 0.05 * (t % 4);
      const ObjectiveValue got = evaluate_q(T, s.scans, s.images, 0.07);
      const oracle::LiteralQ want = oracle::literal_q(T, s.scans, s.images, 0.07);
      EXPECT_EQ(got.count, want.count);
      EXPECT_EQ(got.per_point, want.labels);
    }
  }
}

TEST(EvaluateQ, CountBetweenZeroAndPointTotal) {
  std::mt19937_64 rng(3);
  const oracle::SmallScene s = oracle::random_small_scene(rng, 4, 15);
  const ObjectiveValue v = evaluate_q(s.gt, s.scans, s.images, 0.07);
  int labelled = 0;
  for (const auto& scan : v.per_point) {
    for (int l : scan) labelled += l != kOutlier;
  }
  EXPECT_EQ(v.count, labelled);
  EXPECT_GE(v.count, 0);
  EXPECT_LE(v.count, 60);
}

TEST(EvaluateQ, OverlappingBoardsCountOnceWithLowestIndex) {
  BoardPose a;
  a.t_bc = Vec3(0.2, 0.3, 2.0);
  BoardPose b = a;
  b.t_bc = Vec3(0.5, 0.3, 2.0);
  ImageObservation img;
  img.boards = {normals_from_pose(a, 0.5, 0.5), normals_from_pose(b, 0.5, 0.5)};
  // x = 0.4 lies on both boards; x = 0.9 only on the second.
  const ScanSet scans{{Vec3(0.4, 0.3, 2.0), Vec3(0.9, 0.3, 2.0), Vec3(0.4, 0.3, 3.0)}};
  const ObjectiveValue v = evaluate_q(RigidTransform{}, scans, {img}, 0.05);
  EXPECT_EQ(v.count, 2);
  EXPECT_EQ(v.per_point[0], (std::vector<int>{0, 1, kOutlier}));

  ImageObservation only_first;
  only_first.boards = {img.boards[0]};
  EXPECT_EQ(evaluate_q(RigidTransform{}, scans, {only_first}, 0.05).count, 1);
}

TEST(EvaluateQ, PermutingPointsPermutesLabels) {
  std::mt19937_64 rng(4);
  const oracle::SmallScene s = oracle::random_small_scene(rng, 2, 25, 2);
  const ObjectiveValue base = evaluate_q(s.gt, s.scans, s.images, 0.07);
  for (int n = 0; n < 10; ++n) {
    ScanSet shuffled = s.scans;
    std::vector<std::vector<int>> order(s.scans.size());
    for (std::size_t i = 0; i < s.scans.size(); ++i) {
      order[i].resize(s.scans[i].size());
      std::iota(order[i].begin(), order[i].end(), 0);
      std::shuffle(order[i].begin(), order[i].end(), rng);
      for (std::size_t j = 0; j < order[i].size(); ++j) shuffled[i][j] = s.scans[i][order[i][j]];
    }
    const ObjectiveValue v = evaluate_q(s.gt, shuffled, s.images, 0.07);
    EXPECT_EQ(v.count, base.count);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = 0; j < order[i].size(); ++j) {
        EXPECT_EQ(v.per_point[i][j], base.per_point[i][order[i][j]]);
      }
    }
  }
}

TEST(EvaluateQ, MonotoneInEps) {
  std::mt19937_64 rng(5);
  const oracle::SmallScene s = oracle::random_small_scene(rng, 3, 30);
  std::vector<std::vector<int>> prev;
  for (double eps : {0.005, 0.02, 0.07, 0.2, 0.5}) {
    const ObjectiveValue v = evaluate_q(s.gt, s.scans, s.images, eps);
    if (!prev.empty()) {
      for (std::size_t i = 0; i < prev.size(); ++i) {
        for (std::size_t j = 0; j < prev[i].size(); ++j) {
          if (prev[i][j] != kOutlier) EXPECT_NE(v.per_point[i][j], kOutlier);
        }
      }
    }
    prev = v.per_point;
  }
}

TEST(EvaluateQ, ParallelMatchesSerial) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const oracle::SmallScene s = oracle::random_small_scene(rng, 5, 200, 2);
  const Problem problem(s.scans, s.images, 0.07);
  for (int n = 0; n < 20; ++n) {
    RigidTransform T = s.gt;
    T.t += Vec3(u(rng), u(rng), u(rng)) * 0.03;
    const ObjectiveValue ref = evaluate_q_serial(problem, T);
    EXPECT_EQ(count_inliers(problem, T), ref.count);
    for (int threads : {1, 2, 3, 8}) {
      const ObjectiveValue v = evaluate_q(problem, T, threads);
      EXPECT_EQ(v.count, ref.count);
      EXPECT_EQ(v.per_point, ref.per_point);
    }
  }
}
