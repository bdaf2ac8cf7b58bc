#include "cbextract/model.hpp"

#include <cmath>
#include <string>

#include "cbextract/errors.hpp"

namespace cbx {

namespace {

constexpr double kOrthoTolRad = 1e-6;
constexpr double kMinPlaneDistance = 1e-9;

}  // namespace

void BoardObservation::validate() const {
  const std::array<const Vec3*, 3> n{&nx, &ny, &nz};
  for (const Vec3* v : n) {
    if (!v->allFinite() || v->norm() == 0.0) {
      throw ConfigError("board axis has zero length or non-finite entries");
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double ang = angle_between(*n[a], *n[b]);
      if (std::abs(ang - M_PI_2) > kOrthoTolRad) {
        throw ConfigError("board axes are not mutually orthogonal");
      }
    }
  }
  if (!(dx > 0.0) || !(dy > 0.0)) {
    throw ConfigError("board half dimensions must be positive");
  }
}

BoardAxes BoardAxes::from(const BoardObservation& b) {
  BoardAxes out;
  const std::array<const Vec3*, 3> n{&b.nx, &b.ny, &b.nz};
  for (int k = 0; k < 3; ++k) {
    out.dist[k] = n[k]->norm();
    out.dir[k] = *n[k] / out.dist[k];
  }
  out.half = {b.dx, b.dy, 0.0};
  return out;
}

BoardObservation normals_from_pose(const BoardPose& pose, double dx, double dy) {
  static constexpr const char* kAxisName[3] = {"x", "y", "z"};
  std::array<Vec3, 3> n;
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = pose.r_bc.col(k);
    const double d = axis.dot(pose.t_bc);
    if (!(std::abs(d) >= kMinPlaneDistance)) {
      throw DegenerateError(std::string("camera center lies in the board plane orthogonal to ") +
                            kAxisName[k]);
    }
    n[k] = d * axis;  // sign(d) * axis * |d|
  }
  return BoardObservation{n[0], n[1], n[2], dx, dy};
}

bool inlier_box_test(const LaserPoint& p, const RigidTransform& T,
                     const BoardObservation& b, double eps) {
  const Mat3 r = angle_axis_to_matrix(T.rot);
  const BoardAxes axes = BoardAxes::from(b);
  std::array<Vec3, 3> rotated;
  for (int k = 0; k < 3; ++k) rotated[k] = r * axes.dir[k];
  return inside_box(rotated, axes, p - T.t, eps);
}

}  // namespace cbx
