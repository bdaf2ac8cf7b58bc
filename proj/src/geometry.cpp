#include "cbextract/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace cbx {

bool Box3::contains(const Vec3& x) const {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(x[k] - center[k]) > half_len) return false;
  }
  return true;
}

Mat3 angle_axis_to_matrix(const AngleAxis& a) {
  const double theta = a.v.norm();
  if (theta == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(theta, a.v / theta).toRotationMatrix();
}

AngleAxis matrix_to_angle_axis(const Mat3& r) {
  // Eigen goes through a quaternion, which stays accurate close to pi.
  const Eigen::AngleAxisd aa(r);
  AngleAxis out;
  out.v = aa.axis() * aa.angle();
  if (aa.angle() > M_PI) out.v = -aa.axis() * (2.0 * M_PI - aa.angle());
  return out;
}

std::array<Box3, 8> branch(const Box3& b) {
  if (!(b.half_len > 0.0)) {
    throw std::invalid_argument("branch: box has zero half length");
  }
  const double h = 0.5 * b.half_len;
  std::array<Box3, 8> children;
  for (int k = 0; k < 8; ++k) {
    Vec3 c = b.center;
    for (int d = 0; d < 3; ++d) c[d] += (k >> d & 1) ? h : -h;
    children[k] = Box3{c, h};
  }
  return children;
}

double angle_between(const Vec3& u, const Vec3& w) {
  const double nu = u.norm();
  const double nw = w.norm();
  if (nu == 0.0 || nw == 0.0) {
    throw std::invalid_argument("angle_between: zero-length vector");
  }
  // atan2 of |u x w| and u.w keeps full precision near 0 and pi.
  const double s = u.cross(w).norm();
  const double c = u.dot(w);
  return std::clamp(std::atan2(s, c), 0.0, M_PI);
}

}  // namespace cbx
