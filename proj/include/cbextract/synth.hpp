#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cbextract/model.hpp"

namespace cbx {

/// Seeded uniform source with a fixed, platform-independent stream: each draw
/// consumes one std::mt19937_64 output and keeps its top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

/// Triangular room: two vertical walls at `wall_distance` from the scanner
/// meeting on a line `wall_intersection` straight ahead (+x).
struct Room {
  double wall_distance = 5.0;
  double wall_intersection = 8.0;
};

struct SynthConfig {
  RigidTransform gt{AngleAxis{Vec3(0.0, 10.0 * M_PI / 180.0, 0.0)}, Vec3(-0.75, -0.2, 0.5)};
  /// Scan fan in the laser x-y plane, radians; ray count is
  /// round((fan_end - fan_start) / fan_step) + 1.
  double fan_start = -70.0 * M_PI / 180.0;
  double fan_end = 70.0 * M_PI / 180.0;
  double fan_step = 2.0 * M_PI / 180.0;
  Room room;
  double board_dx = 0.75;
  double board_dy = 0.75;
  /// Range noise is uniform on [-range_noise, range_noise] meters.
  double range_noise = 0.02;
  /// Each observed board pose is rotated about the camera center by
  /// Rz(c) Ry(b) Rx(a), with a, b, c uniform on [-normal_noise, normal_noise].
  double normal_noise = M_PI / 180.0;
  std::uint64_t seed = 1;

  int ray_count() const;
  double ray_angle(int j) const { return fan_start + j * fan_step; }
  /// Throws ConfigError on invalid values.
  void validate() const;
};

/// Board poses of one image; an empty list means no board in view.
using ImagePoses = std::vector<BoardPose>;

struct SynthScene {
  ScanSet scans;
  std::vector<ImageObservation> images;
  /// Per scan and point: the index of the board hit, or -1 for a wall.
  std::vector<std::vector<int>> labels;
  RigidTransform gt;

  int board_point_count() const;
  int point_count() const;
};

/// Range along the scan-plane ray `dir` (unit 2-vector) to the nearer wall.
/// Throws std::invalid_argument if the ray meets neither wall.
double wall_intersection(const Eigen::Vector2d& dir, const Room& room);

/// Simulate one laser scan and one camera observation per entry of `poses`.
///
/// Rays leave the laser origin in the plane z = 0 and stop at the first board
/// (within its extent) or else at the wall. Random draws happen in this order:
/// for each image, one range draw per ray in fan order, then three rotation
/// angles (x, y, z) per board in list order.
SynthScene generate(const SynthConfig& cfg, const std::vector<ImagePoses>& poses);

/// Number of wall-labelled points that fall inside a board box at the ground
/// truth transform. Zero means labels and the objective agree on walls.
int wall_points_inside_boxes(const SynthScene& scene, double eps);

}  // namespace cbx
