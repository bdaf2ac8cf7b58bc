#include <cmath>

#include <gtest/gtest.h>

#include "cbextract/errors.hpp"
#include "cbextract/scene_io.hpp"
#include "cbextract/synth.hpp"
#include "oracles.hpp"

using namespace cbx;

namespace {

constexpr double kDeg = M_PI / 180.0;

PosesFile bundled_poses() { return poses_from_json(read_json(CBX_DATA_DIR "/synthetic_poses.json")); }
SynthConfig bundled_config() {
  return synth_config_from_json(read_json(CBX_DATA_DIR "/synthetic_config.json"));
}

SynthConfig quiet(SynthConfig cfg) {
  cfg.range_noise = 0.0;
  cfg.normal_noise = 0.0;
  return cfg;
}

/// Camera-frame pose of a board centered on the laser x axis at `range`,
/// facing the scanner, for the given ground truth.
BoardPose facing_board(const RigidTransform& gt, double range) {
  const Mat3 phi = oracle::rodrigues(gt.rot.v);
  Mat3 axes;  // board x up, y to the right as seen from the scanner, z back at it
  axes.col(0) = Vec3(0, 0, 1);
  axes.col(2) = Vec3(-1, 0, 0);
  axes.col(1) = axes.col(2).cross(axes.col(0));
  return BoardPose{phi.transpose() * axes, phi.transpose() * (Vec3(range, 0, 0) - gt.t)};
}

}  // namespace

TEST(SynthConfig, DefaultFanHas71Rays) {
  const SynthConfig cfg;
  EXPECT_EQ(cfg.ray_count(), 71);
  EXPECT_NEAR(cfg.ray_angle(0), -70 * kDeg, 1e-15);
  EXPECT_NEAR(cfg.ray_angle(70), 70 * kDeg, 1e-12);
}

TEST(SynthConfig, ValidateRejectsBadValues) {
  SynthConfig cfg;
  cfg.fan_step = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.room.wall_intersection = 4.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.range_noise = -0.01;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(WallIntersection, ForwardAndNormalRays) {
  const Room room;
  EXPECT_NEAR(wall_intersection(Eigen::Vector2d(1, 0), room), 8.0, 1e-12);
  const double c = 5.0 / 8.0, s = std::sqrt(1 - c * c);
  EXPECT_NEAR(wall_intersection(Eigen::Vector2d(c, s), room), 5.0, 1e-12);
  EXPECT_NEAR(wall_intersection(Eigen::Vector2d(c, -s), room), 5.0, 1e-12);
}

TEST(WallIntersection, FanRaysStayBetweenFiveAndEight) {
  const SynthConfig cfg;
  for (int j = 0; j < cfg.ray_count(); ++j) {
    const double a = cfg.ray_angle(j);
    const double r = wall_intersection(Eigen::Vector2d(std::cos(a), std::sin(a)), cfg.room);
    EXPECT_GE(r, 5.0 - 1e-12);
    EXPECT_LE(r, 8.0 + 1e-12);
  }
}

TEST(WallIntersection, BackwardRayThrows) {
  EXPECT_THROW(wall_intersection(Eigen::Vector2d(-1, 0), Room{}), std::invalid_argument);
}

TEST(Generate, WideBoardShadowsTheWallWhereItIsNearer) {
  SynthConfig cfg = quiet(SynthConfig{});
  cfg.board_dx = 0.5;
  cfg.board_dy = 20.0;
  const SynthScene s = generate(cfg, {{facing_board(cfg.gt, 3.0)}});
  ASSERT_EQ(s.scans.size(), 1u);
  ASSERT_EQ(s.scans[0].size(), 71u);
  int nearer = 0;
  for (int j = 0; j < 71; ++j) {
    const double a = cfg.ray_angle(j);
    const double board = 3.0 / std::cos(a);
    const double wall = wall_intersection(Eigen::Vector2d(std::cos(a), std::sin(a)), cfg.room);
    const bool hit = board < wall;
    nearer += hit;
    EXPECT_NEAR(s.scans[0][j].norm(), hit ? board : wall, 1e-9) << j;
    EXPECT_EQ(s.labels[0][j], hit ? 0 : -1) << j;
    EXPECT_EQ(s.scans[0][j].z(), 0.0);
  }
  EXPECT_EQ(s.board_point_count(), nearer);
  EXPECT_GT(nearer, 40);
}

TEST(Generate, WideBoardFillsTheFanInALargeRoom) {
  SynthConfig cfg = quiet(SynthConfig{});
  cfg.room = Room{10.0, 16.0};
  cfg.board_dx = 0.5;
  cfg.board_dy = 20.0;
  const SynthScene s = generate(cfg, {{facing_board(cfg.gt, 3.0)}});
  ASSERT_EQ(s.scans[0].size(), 71u);
  EXPECT_EQ(s.board_point_count(), 71);
  for (int j = 0; j < 71; ++j) {
    EXPECT_NEAR(s.scans[0][j].norm(), 3.0 / std::cos(cfg.ray_angle(j)), 1e-9) << j;
  }
}

TEST(Generate, BoardBehindTheScannerIsMissed) {
  const SynthConfig cfg = quiet(SynthConfig{});
  const SynthScene s = generate(cfg, {{facing_board(cfg.gt, -3.0)}, {}});
  EXPECT_EQ(s.board_point_count(), 0);
  EXPECT_EQ(s.point_count(), 142);
  EXPECT_TRUE(s.images[1].boards.empty());
}

TEST(Generate, SameSeedSameScene) {
  const SynthScene a = generate(bundled_config(), bundled_poses());
  const SynthScene b = generate(bundled_config(), bundled_poses());
  EXPECT_EQ(scene_to_json(SceneFile::from(a)).dump(), scene_to_json(SceneFile::from(b)).dump());
  SynthConfig other = bundled_config();
  other.seed += 1;
  EXPECT_NE(scene_to_json(SceneFile::from(generate(other, bundled_poses()))).dump(),
            scene_to_json(SceneFile::from(a)).dump());
}

TEST(Generate, RangeNoiseStaysInBounds) {
  const SynthConfig cfg = bundled_config();
  const SynthScene noisy = generate(cfg, bundled_poses());
  const SynthScene clean = generate(quiet(cfg), bundled_poses());
  for (std::size_t i = 0; i < clean.scans.size(); ++i) {
    for (std::size_t j = 0; j < clean.scans[i].size(); ++j) {
      EXPECT_LE(std::abs(noisy.scans[i][j].norm() - clean.scans[i][j].norm()), cfg.range_noise);
    }
  }
  EXPECT_EQ(noisy.labels, clean.labels);
}

TEST(BundledScene, CountsMatchTheDesign) {
  const SynthScene s = generate(bundled_config(), bundled_poses());
  EXPECT_EQ(s.point_count(), 426);
  EXPECT_EQ(s.board_point_count(), 42);
  std::vector<int> per_scan;
  for (const auto& scan : s.labels) {
    int n = 0;
    for (int l : scan) n += l >= 0;
    per_scan.push_back(n);
  }
  // Board 3 is only partly cut by the scan plane; board 4 is missed.
  EXPECT_EQ(per_scan[3], 4);
  EXPECT_EQ(per_scan[4], 0);
}

TEST(BundledScene, BoardOnTheWallLeavesNoRangeStep) {
  const SynthScene s = generate(quiet(bundled_config()), bundled_poses());
  const SynthConfig cfg;
  for (std::size_t j = 0; j < s.scans[2].size(); ++j) {
    const double a = cfg.ray_angle(static_cast<int>(j));
    EXPECT_NEAR(s.scans[2][j].norm(), wall_intersection(Eigen::Vector2d(std::cos(a), std::sin(a)), cfg.room), 1e-4);
  }
  int on_board = 0;
  for (int l : s.labels[2]) on_board += l == 0;
  EXPECT_GT(on_board, 0);
}

TEST(BundledScene, ZeroNoiseLabelsAgreeWithBoxTest) {
  const SynthScene s = generate(quiet(bundled_config()), bundled_poses());
  for (double eps : {1e-9, 1e-3, 0.07}) {
    const ObjectiveValue v = evaluate_q(s.gt, s.scans, s.images, eps);
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      for (std::size_t j = 0; j < s.labels[i].size(); ++j) {
        if (s.labels[i][j] >= 0) EXPECT_EQ(v.per_point[i][j], s.labels[i][j]) << i << ' ' << j;
      }
    }
  }
  // The board flat on the wall shares its plane with the wall, so wall points
  // next to it only stay out while eps is below their in-plane gap.
  EXPECT_EQ(wall_points_inside_boxes(s, 0.07), 0);
  EXPECT_EQ(wall_points_inside_boxes(s, 0.25), 0);
  EXPECT_GT(wall_points_inside_boxes(s, 0.5), 0);
}

TEST(BundledScene, GroundTruthKeepsAll42UnderNoise) {
  const SynthScene s = generate(bundled_config(), bundled_poses());
  const ObjectiveValue v = evaluate_q(s.gt, s.scans, s.images, 0.07);
  EXPECT_EQ(v.count, 42);
  EXPECT_EQ(v.per_point, s.labels);
}

TEST(BundledScene, CheckedInSceneMatchesGenerator) {
  const SynthScene s = generate(bundled_config(), bundled_poses());
  const nlohmann::json fresh = scene_to_json(SceneFile::from(s));
  EXPECT_EQ(read_json(CBX_DATA_DIR "/synthetic_scene.json"), fresh);
}
