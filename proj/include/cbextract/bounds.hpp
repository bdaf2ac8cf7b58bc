#pragma once

#include "cbextract/objective.hpp"

namespace cbx {

enum class BoundMode { loose, tight };

/// Rotation box paired with a translation box, with the cached bound and the
/// objective at the cell center.
struct SearchCell {
  Box3 rot;
  Box3 trans;
  int upper = 0;
  int center_q = 0;

  RigidTransform center() const { return RigidTransform{AngleAxis{rot.center}, trans.center}; }
};

/// Range of g(R) = (R n)^T (p - t_c) over the spherical cap of directions R n
/// within angle sqrt(3) * rot.half_len of R_c n.
struct CapExtremum {
  double g_max = 0.0;
  double g_min = 0.0;
};

/// Half angle of the cap swept by R n over a rotation box, clamped to pi.
double cap_half_angle(double rot_half);

/// Per-point slack of the ball bound:
/// |p - t_c| * sqrt(2 (1 - cos a)) + sqrt(3) * trans_half, a = cap_half_angle.
double delta_loose(const LaserPoint& p, const SearchCell& cell);

/// Extremes of g over the cap. n_dir must be a unit vector (1e-9).
CapExtremum cap_extremum(const Vec3& n_dir, const LaserPoint& p, const SearchCell& cell);

/// Per-point, per-axis slack of the cap bound:
/// sqrt(3) * trans_half + max(|c - g_min|, |c - g_max|), c = (R_c n)^T (p - t_c).
double delta_tight(const Vec3& n_dir, const LaserPoint& p, const SearchCell& cell);

/// Cap extremes from the quantities the kernels already hold: the rotated axis
/// `axis` (unit), the shifted point v = p - t_c, and the cap half angle.
CapExtremum cap_extremum_at(const Vec3& axis, const Vec3& v, double cap_angle);

/// Upper bound on the inlier count of every transform in the cell. Each
/// point's box test at the cell center is widened by its slack; multi-board
/// images count a point once if any board's widened box holds it.
/// The point loop runs on `threads` OpenMP workers (0 = default, 1 = serial).
int upper_bound(const Problem& problem, const SearchCell& cell, BoundMode mode, int threads = 1);

/// Plain single-threaded reference for upper_bound.
int upper_bound_serial(const Problem& problem, const SearchCell& cell, BoundMode mode);

int upper_bound(const SearchCell& cell, const ScanSet& scans,
                const std::vector<ImageObservation>& images, double eps, BoundMode mode);

}  // namespace cbx
