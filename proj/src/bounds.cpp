#include "cbextract/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "cbextract/parallel.hpp"

namespace cbx {

namespace {

const double kSqrt3 = std::sqrt(3.0);

/// Chord length of a unit-sphere arc of angle a.
double ball_radius(double cap_angle) { return std::sqrt(2.0 * (1.0 - std::cos(cap_angle))); }

struct CellTerms {
  RotatedBoards rotated;
  double cap_angle;
  double chord;
  double trans_slack;
};

CellTerms cell_terms(const Problem& problem, const SearchCell& cell) {
  const double a = cap_half_angle(cell.rot.half_len);
  return CellTerms{rotate_boards(problem, angle_axis_to_matrix(AngleAxis{cell.rot.center})), a,
                   ball_radius(a), kSqrt3 * cell.trans.half_len};
}

bool widened_hit(const Problem& problem, const CellTerms& terms, std::size_t image,
                 const Vec3& v, BoundMode mode) {
  const auto& boards = problem.boards(image);
  const double eps = problem.eps();
  const double loose = v.norm() * terms.chord + terms.trans_slack;

  for (std::size_t b = 0; b < boards.size(); ++b) {
    const auto& axes = boards[b];
    const auto& dirs = terms.rotated[image][b];
    bool inside = true;
    for (int k : {2, 0, 1}) {
      const double c = dirs[k].dot(v);
      const double offset = std::abs(c - axes.dist[k]);
      double delta = loose;
      if (mode == BoundMode::tight) {
        // The cap slack never exceeds the ball slack, so a point the ball
        // test rejects (with a little headroom for rounding) is rejected here too.
        if (!(offset < axes.half[k] + eps + loose + 1e-9)) {
          inside = false;
          break;
        }
        const CapExtremum g = cap_extremum_at(dirs[k], v, terms.cap_angle);
        delta = terms.trans_slack + std::max(std::abs(c - g.g_min), std::abs(c - g.g_max));
      }
      if (!(offset < axes.half[k] + eps + delta)) {
        inside = false;
        break;
      }
    }
    if (inside) return true;
  }
  return false;
}

}  // namespace

double cap_half_angle(double rot_half) { return std::min(kSqrt3 * rot_half, M_PI); }

double delta_loose(const LaserPoint& p, const SearchCell& cell) {
  return (p - cell.trans.center).norm() * ball_radius(cap_half_angle(cell.rot.half_len)) +
         kSqrt3 * cell.trans.half_len;
}

CapExtremum cap_extremum_at(const Vec3& axis, const Vec3& v, double cap_angle) {
  const double r = v.norm();
  if (r == 0.0) return {0.0, 0.0};
  const double c = axis.dot(v);
  if (cap_angle == 0.0) return {c, c};

  const double beta = std::atan2(axis.cross(v).norm(), c);
  const double lo = std::cos(beta - cap_angle);
  const double hi = std::cos(beta + cap_angle);
  CapExtremum out;
  out.g_max = beta <= cap_angle ? r : r * std::max(lo, hi);
  out.g_min = beta >= M_PI - cap_angle ? -r : r * std::min(lo, hi);
  return out;
}

CapExtremum cap_extremum(const Vec3& n_dir, const LaserPoint& p, const SearchCell& cell) {
  if (std::abs(n_dir.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("cap_extremum: direction is not a unit vector");
  }
  const Vec3 axis = angle_axis_to_matrix(AngleAxis{cell.rot.center}) * n_dir;
  return cap_extremum_at(axis, p - cell.trans.center, cap_half_angle(cell.rot.half_len));
}

double delta_tight(const Vec3& n_dir, const LaserPoint& p, const SearchCell& cell) {
  const CapExtremum g = cap_extremum(n_dir, p, cell);
  const Vec3 axis = angle_axis_to_matrix(AngleAxis{cell.rot.center}) * n_dir;
  const double c = axis.dot(p - cell.trans.center);
  return kSqrt3 * cell.trans.half_len + std::max(std::abs(c - g.g_min), std::abs(c - g.g_max));
}

int upper_bound(const Problem& problem, const SearchCell& cell, BoundMode mode, int threads) {
  const CellTerms terms = cell_terms(problem, cell);
  const auto& pts = problem.points();
  const auto& scan_of = problem.scan_of();
  const long n = static_cast<long>(pts.size());
  const int nt = resolve_threads(threads);
  int count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static) num_threads(nt) if (nt > 1)
  for (long j = 0; j < n; ++j) {
    if (widened_hit(problem, terms, scan_of[j], pts[j] - cell.trans.center, mode)) ++count;
  }
  return count;
}

int upper_bound_serial(const Problem& problem, const SearchCell& cell, BoundMode mode) {
  const CellTerms terms = cell_terms(problem, cell);
  int count = 0;
  for (std::size_t i = 0; i < problem.num_scans(); ++i) {
    for (std::size_t j = problem.offsets()[i]; j < problem.offsets()[i + 1]; ++j) {
      if (widened_hit(problem, terms, i, problem.points()[j] - cell.trans.center, mode)) ++count;
    }
  }
  return count;
}

int upper_bound(const SearchCell& cell, const ScanSet& scans,
                const std::vector<ImageObservation>& images, double eps, BoundMode mode) {
  return upper_bound(Problem(scans, images, eps), cell, mode, 1);
}

}  // namespace cbx
