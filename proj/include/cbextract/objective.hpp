#pragma once

#include <cstddef>
#include <vector>

#include "cbextract/model.hpp"

namespace cbx {

/// Label value for points outside every inlier box.
inline constexpr int kOutlier = -1;

/// Inlier count plus, per scan and point, the board the point was matched to
/// (lowest board index among the boxes that contain it) or kOutlier.
struct ObjectiveValue {
  int count = 0;
  std::vector<std::vector<int>> per_point;
};

/// Scans and board observations flattened for the counting kernels.
///
/// Points are stored scan-major in one array; `offsets[i]` is the first flat
/// index of scan i. Board axes are precomputed once per problem.
class Problem {
 public:
  /// Throws ConfigError if scans and images differ in length, eps is not
  /// positive, or a board fails BoardObservation::validate().
  Problem(const ScanSet& scans, const std::vector<ImageObservation>& images, double eps);

  double eps() const { return eps_; }
  std::size_t num_scans() const { return boards_.size(); }
  std::size_t num_points() const { return points_.size(); }
  std::size_t scan_size(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<int>& scan_of() const { return scan_of_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<BoardAxes>& boards(std::size_t image) const { return boards_[image]; }

 private:
  double eps_;
  std::vector<Vec3> points_;
  std::vector<int> scan_of_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<BoardAxes>> boards_;
};

/// Board axes of every image rotated by one candidate rotation.
using RotatedBoards = std::vector<std::vector<std::array<Vec3, 3>>>;
RotatedBoards rotate_boards(const Problem& problem, const Mat3& rotation);

/// Board index whose box contains shifted point v (p - t), or kOutlier.
int classify_point(const Problem& problem, const RotatedBoards& rotated, std::size_t image,
                   const Vec3& v);

/// Inlier count only; serial. This is what the search calls per cell center.
int count_inliers(const Problem& problem, const RigidTransform& T);

/// Full objective. The point loop runs on OpenMP with `threads` workers
/// (0 = runtime default, 1 = no parallel region).
ObjectiveValue evaluate_q(const Problem& problem, const RigidTransform& T, int threads = 0);

/// Plain single-threaded loop, kept as the reference for evaluate_q.
ObjectiveValue evaluate_q_serial(const Problem& problem, const RigidTransform& T);

/// Convenience overload that builds the Problem.
ObjectiveValue evaluate_q(const RigidTransform& T, const ScanSet& scans,
                          const std::vector<ImageObservation>& images, double eps);

}  // namespace cbx
