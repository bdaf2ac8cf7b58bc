#pragma once

#include <array>
#include <vector>

#include "cbextract/geometry.hpp"

namespace cbx {

/// 3D laser return in the laser frame, meters. 2D scanners use z = 0.
using LaserPoint = Vec3;
using Scan = std::vector<LaserPoint>;
/// One scan per image; scans may have different lengths, including zero.
using ScanSet = std::vector<Scan>;

/// Camera-frame description of one checkerboard.
///
/// nx, ny, nz point along the board's x, y and z axes. Each norm is the
/// distance from the camera center to the board-frame plane orthogonal to that
/// axis, so together with the half dimensions dx, dy they fix the inlier box.
struct BoardObservation {
  Vec3 nx = Vec3::Zero();
  Vec3 ny = Vec3::Zero();
  Vec3 nz = Vec3::Zero();
  double dx = 0.0;
  double dy = 0.0;

  /// Throws ConfigError if the axes are not mutually orthogonal (1e-6 rad),
  /// any axis has zero length, or a half dimension is not positive.
  void validate() const;
};

struct ImageObservation {
  std::vector<BoardObservation> boards;
};

/// Camera-to-laser extrinsic: p_laser = R(rot) * p_camera + t.
struct RigidTransform {
  AngleAxis rot;
  Vec3 t = Vec3::Zero();
};

/// Board frame to camera frame: p_camera = r_bc * p_board + t_bc.
struct BoardPose {
  Mat3 r_bc = Mat3::Identity();
  Vec3 t_bc = Vec3::Zero();
};

/// Unit axes, plane distances and half extents of a board, laid out for the
/// per-point tests. half[2] is zero: the box is only eps thick along z.
struct BoardAxes {
  std::array<Vec3, 3> dir;
  std::array<double, 3> dist{};
  std::array<double, 3> half{};

  static BoardAxes from(const BoardObservation& b);
};

/// Normals of a board with half dimensions dx, dy seen at `pose`. Each axis is
/// oriented so that its dot product with the board origin is positive.
/// Throws DegenerateError when the camera center lies in one of the board
/// planes (distance below 1e-9 m).
BoardObservation normals_from_pose(const BoardPose& pose, double dx, double dy);

/// True iff p lies strictly inside the inlier box of board b under transform T:
/// |n_k . R^T (p - t) - |N_k|| < half_k + eps for the three board axes.
bool inlier_box_test(const LaserPoint& p, const RigidTransform& T,
                     const BoardObservation& b, double eps);

/// Same test with the board axes already rotated into the laser frame
/// (rotated_dir[k] = R * dir[k]) and the point already shifted (v = p - t).
/// Shared by every code path that counts inliers so they agree bit for bit.
inline bool inside_box(const std::array<Vec3, 3>& rotated_dir,
                       const BoardAxes& axes, const Vec3& v, double eps) {
  // z first: it rejects most background points.
  for (int k : {2, 0, 1}) {
    const double offset = rotated_dir[k].dot(v) - axes.dist[k];
    if (!(std::abs(offset) < axes.half[k] + eps)) return false;
  }
  return true;
}

}  // namespace cbx
