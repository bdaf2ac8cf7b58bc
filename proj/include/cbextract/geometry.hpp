#pragma once

#include <array>

#include <Eigen/Core>

namespace cbx {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation as an angle-axis vector: direction is the axis, norm the angle (rad).
struct AngleAxis {
  Vec3 v = Vec3::Zero();

  double angle() const { return v.norm(); }
};

/// Axis-aligned cube given by its center and half side length. Used both for
/// rotation boxes (angle-axis space, radians) and translation boxes (meters).
struct Box3 {
  Vec3 center = Vec3::Zero();
  double half_len = 0.0;

  bool contains(const Vec3& x) const;
  double volume() const { return 8.0 * half_len * half_len * half_len; }
};

/// Exponential map (Rodrigues). The zero vector maps to the identity.
Mat3 angle_axis_to_matrix(const AngleAxis& a);

/// Logarithm map. Returns the vector with norm in [0, pi].
AngleAxis matrix_to_angle_axis(const Mat3& r);

/// Split a box into its 8 octants. Child k takes the upper half along axis
/// d iff bit d of k is set.
std::array<Box3, 8> branch(const Box3& b);

/// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Vec3& u, const Vec3& w);

}  // namespace cbx
