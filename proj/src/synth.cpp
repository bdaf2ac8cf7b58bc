#include "cbextract/synth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Geometry>

#include "cbextract/errors.hpp"
#include "cbextract/objective.hpp"

namespace cbx {

namespace {
constexpr double kOnWall = 1e-5;
}  // namespace

int SynthConfig::ray_count() const {
  return static_cast<int>(std::lround((fan_end - fan_start) / fan_step)) + 1;
}

void SynthConfig::validate() const {
  if (!(fan_step > 0.0) || !(fan_end >= fan_start)) throw ConfigError("invalid scan fan");
  if (!(room.wall_distance > 0.0) || !(room.wall_intersection > room.wall_distance)) {
    throw ConfigError("wall intersection must lie beyond the wall distance");
  }
  if (!(board_dx > 0.0) || !(board_dy > 0.0)) throw ConfigError("board size must be positive");
  if (!(range_noise >= 0.0) || !(normal_noise >= 0.0)) {
    throw ConfigError("noise bounds must be non-negative");
  }
  if (gt.rot.angle() > M_PI) throw ConfigError("ground-truth rotation angle exceeds pi");
}

int SynthScene::board_point_count() const {
  int n = 0;
  for (const auto& scan : labels) {
    for (int l : scan) n += l >= 0;
  }
  return n;
}

int SynthScene::point_count() const {
  int n = 0;
  for (const auto& scan : scans) n += static_cast<int>(scan.size());
  return n;
}

double wall_intersection(const Eigen::Vector2d& dir, const Room& room) {
  // Wall normals make angle acos(d / D) with +x on either side.
  const double c = room.wall_distance / room.wall_intersection;
  const double s = std::sqrt(1.0 - c * c);
  double best = std::numeric_limits<double>::infinity();
  for (const Eigen::Vector2d& n : {Eigen::Vector2d(c, s), Eigen::Vector2d(c, -s)}) {
    const double cosine = n.dot(dir);
    if (cosine > 1e-12) best = std::min(best, room.wall_distance / cosine);
  }
  if (!std::isfinite(best)) throw std::invalid_argument("ray does not meet the room walls");
  return best;
}

SynthScene generate(const SynthConfig& cfg, const std::vector<ImagePoses>& poses) {
  cfg.validate();
  const Mat3 rot = angle_axis_to_matrix(cfg.gt.rot);
  const Vec3& trans = cfg.gt.t;
  Rng rng(cfg.seed);

  SynthScene scene;
  scene.gt = cfg.gt;
  scene.scans.resize(poses.size());
  scene.labels.resize(poses.size());
  scene.images.resize(poses.size());

  for (std::size_t i = 0; i < poses.size(); ++i) {
    const ImagePoses& boards = poses[i];
    for (int j = 0; j < cfg.ray_count(); ++j) {
      const double theta = cfg.ray_angle(j);
      const Vec3 d(std::cos(theta), std::sin(theta), 0.0);
      const double wall = wall_intersection(Eigen::Vector2d(d.x(), d.y()), cfg.room);

      double board_range = std::numeric_limits<double>::infinity();
      int board_hit = -1;
      for (std::size_t k = 0; k < boards.size(); ++k) {
        const BoardPose& pose = boards[k];
        const Vec3 normal = rot * pose.r_bc.col(2);
        const Vec3 center = rot * pose.t_bc + trans;
        const double denom = normal.dot(d);
        if (std::abs(denom) < 1e-12) continue;
        const double range = normal.dot(center) / denom;
        if (!(range > 0.0) || !(range < board_range)) continue;
        const Vec3 local = pose.r_bc.transpose() * (rot.transpose() * (range * d - trans) - pose.t_bc);
        if (std::abs(local.x()) <= cfg.board_dx && std::abs(local.y()) <= cfg.board_dy) {
          board_range = range;
          board_hit = static_cast<int>(k);
        }
      }

      // A board mounted on the wall wins the tie; poses read from text are
      // only accurate to a few micrometers.
      int label = -1;
      double range = wall;
      if (board_hit >= 0 && board_range <= wall + kOnWall) {
        label = board_hit;
        range = board_range;
      }
      range += rng.uniform(-cfg.range_noise, cfg.range_noise);
      scene.scans[i].push_back(range * d);
      scene.labels[i].push_back(label);
    }

    for (const BoardPose& pose : boards) {
      const double ax = rng.uniform(-cfg.normal_noise, cfg.normal_noise);
      const double ay = rng.uniform(-cfg.normal_noise, cfg.normal_noise);
      const double az = rng.uniform(-cfg.normal_noise, cfg.normal_noise);
      const Mat3 noise = (Eigen::AngleAxisd(az, Vec3::UnitZ()) * Eigen::AngleAxisd(ay, Vec3::UnitY()) *
                          Eigen::AngleAxisd(ax, Vec3::UnitX()))
                             .toRotationMatrix();
      const BoardPose seen{noise * pose.r_bc, noise * pose.t_bc};
      scene.images[i].boards.push_back(normals_from_pose(seen, cfg.board_dx, cfg.board_dy));
    }
  }
  return scene;
}

int wall_points_inside_boxes(const SynthScene& scene, double eps) {
  const ObjectiveValue v = evaluate_q(scene.gt, scene.scans, scene.images, eps);
  int n = 0;
  for (std::size_t i = 0; i < v.per_point.size(); ++i) {
    for (std::size_t j = 0; j < v.per_point[i].size(); ++j) {
      n += scene.labels[i][j] < 0 && v.per_point[i][j] != kOutlier;
    }
  }
  return n;
}

}  // namespace cbx
