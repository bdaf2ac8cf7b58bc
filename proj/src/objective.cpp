#include "cbextract/objective.hpp"

#include <string>

#include "cbextract/errors.hpp"
#include "cbextract/parallel.hpp"

namespace cbx {

Problem::Problem(const ScanSet& scans, const std::vector<ImageObservation>& images, double eps)
    : eps_(eps) {
  if (scans.size() != images.size()) {
    throw ConfigError("scene has " + std::to_string(scans.size()) + " scans but " +
                      std::to_string(images.size()) + " images");
  }
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");

  offsets_.reserve(scans.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < scans.size(); ++i) {
    for (const auto& p : scans[i]) {
      if (!p.allFinite()) throw ConfigError("laser point with non-finite coordinates");
      points_.push_back(p);
      scan_of_.push_back(static_cast<int>(i));
    }
    offsets_.push_back(points_.size());
  }

  boards_.resize(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const auto& b : images[i].boards) {
      b.validate();
      boards_[i].push_back(BoardAxes::from(b));
    }
  }
}

RotatedBoards rotate_boards(const Problem& problem, const Mat3& rotation) {
  RotatedBoards out(problem.num_scans());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& boards = problem.boards(i);
    out[i].resize(boards.size());
    for (std::size_t k = 0; k < boards.size(); ++k) {
      for (int a = 0; a < 3; ++a) out[i][k][a] = rotation * boards[k].dir[a];
    }
  }
  return out;
}

int classify_point(const Problem& problem, const RotatedBoards& rotated, std::size_t image,
                   const Vec3& v) {
  const auto& boards = problem.boards(image);
  for (std::size_t k = 0; k < boards.size(); ++k) {
    if (inside_box(rotated[image][k], boards[k], v, problem.eps())) return static_cast<int>(k);
  }
  return kOutlier;
}

int count_inliers(const Problem& problem, const RigidTransform& T) {
  const RotatedBoards rotated = rotate_boards(problem, angle_axis_to_matrix(T.rot));
  const auto& pts = problem.points();
  const auto& scan_of = problem.scan_of();
  int count = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (classify_point(problem, rotated, scan_of[j], pts[j] - T.t) != kOutlier) ++count;
  }
  return count;
}

namespace {

ObjectiveValue empty_labels(const Problem& problem) {
  ObjectiveValue out;
  out.per_point.resize(problem.num_scans());
  for (std::size_t i = 0; i < problem.num_scans(); ++i) {
    out.per_point[i].assign(problem.scan_size(i), kOutlier);
  }
  return out;
}

}  // namespace

ObjectiveValue evaluate_q(const Problem& problem, const RigidTransform& T, int threads) {
  ObjectiveValue out = empty_labels(problem);
  const RotatedBoards rotated = rotate_boards(problem, angle_axis_to_matrix(T.rot));
  const auto& pts = problem.points();
  const auto& scan_of = problem.scan_of();
  const auto& offsets = problem.offsets();
  const long n = static_cast<long>(pts.size());
  const int nt = resolve_threads(threads);
  int count = 0;

  // Each iteration writes its own label slot; the count is an integer sum.
#pragma omp parallel for reduction(+ : count) schedule(static) num_threads(nt) if (nt > 1)
  for (long j = 0; j < n; ++j) {
    const int i = scan_of[j];
    const int label = classify_point(problem, rotated, i, pts[j] - T.t);
    out.per_point[i][j - offsets[i]] = label;
    if (label != kOutlier) ++count;
  }
  out.count = count;
  return out;
}

ObjectiveValue evaluate_q_serial(const Problem& problem, const RigidTransform& T) {
  ObjectiveValue out = empty_labels(problem);
  const RotatedBoards rotated = rotate_boards(problem, angle_axis_to_matrix(T.rot));
  const auto& pts = problem.points();
  for (std::size_t i = 0; i < problem.num_scans(); ++i) {
    for (std::size_t j = problem.offsets()[i]; j < problem.offsets()[i + 1]; ++j) {
      const int label = classify_point(problem, rotated, i, pts[j] - T.t);
      out.per_point[i][j - problem.offsets()[i]] = label;
      if (label != kOutlier) ++out.count;
    }
  }
  return out;
}

ObjectiveValue evaluate_q(const RigidTransform& T, const ScanSet& scans,
                          const std::vector<ImageObservation>& images, double eps) {
  return evaluate_q(Problem(scans, images, eps), T, 0);
}

}  // namespace cbx
