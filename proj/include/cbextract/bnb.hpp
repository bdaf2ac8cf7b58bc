#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "cbextract/bounds.hpp"

namespace cbx {

/// Comparison used to decide whether a child cell enters the queue.
/// `strictly_greater` prunes cells whose bound only ties the incumbent;
/// `geq` keeps them.
enum class PushRule { strictly_greater, geq };

enum class Termination { bound_met, max_iterations, stall, queue_exhausted };

std::string_view to_string(Termination t);
std::string_view to_string(BoundMode m);
std::string_view to_string(PushRule r);

struct BnbConfig {
  double eps = 0.07;
  /// Half side of the root rotation box (rad). Defaults to the whole pi-ball.
  double init_rot_half = M_PI;
  double init_trans_half = 1.0;
  BoundMode mode = BoundMode::tight;
  std::optional<std::int64_t> max_iterations;
  /// Stop once the incumbent has not improved for this many iterations and
  /// holds at least `min_inliers` points.
  std::optional<std::int64_t> stall_window;
  int min_inliers = 0;
  PushRule push_rule = PushRule::strictly_greater;
  /// Cells with both halves below these sizes are popped but not branched.
  double min_rot_half = 1e-7;
  double min_trans_half = 1e-7;
  /// Workers for child evaluation (0 = OpenMP default, 1 = serial).
  int threads = 0;

  /// Throws ConfigError on non-positive eps or box sizes.
  void validate() const;
};

/// One row per pop: the incumbent and the popped bound as seen at the
/// termination check, and the queue size after the pop.
struct TraceRecord {
  std::int64_t iteration = 0;
  int best_q = 0;
  int popped_upper = 0;
  std::int64_t queue_size = 0;
};

struct Inlier {
  int index = 0;
  int board = 0;
};

struct ExtractionResult {
  RigidTransform best;
  int best_q = 0;
  /// Per scan, the points counted at `best`, in index order.
  std::vector<std::vector<Inlier>> inliers;
  /// Per scan and point, the matched board or kOutlier.
  std::vector<std::vector<int>> labels;
  std::vector<TraceRecord> trace;
  Termination terminated_by = Termination::queue_exhausted;
  std::int64_t iterations = 0;
  /// Iteration whose expansion produced the final incumbent (0 = root center).
  std::int64_t best_iteration = 0;
  std::int64_t cells_pushed = 0;
  std::int64_t cells_evaluated = 0;
};

/// Max-queue of cells on `upper`; equal bounds pop in insertion order.
class CellQueue {
 public:
  void push(const SearchCell& cell);
  SearchCell pop();
  const SearchCell& top() const { return heap_.top().cell; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    SearchCell cell;
    std::uint64_t seq;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.cell.upper != b.cell.upper) return a.cell.upper < b.cell.upper;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
  std::uint64_t next_seq_ = 0;
};

/// Best-first branch and bound over (rotation, translation) cells centered at
/// the origin. Each pop splits both boxes into octants and scores the 64
/// child pairs; children whose bound beats the incumbent are queued and the
/// incumbent is replaced whenever a child center scores higher. The search
/// reports Termination::bound_met when a popped bound equals the incumbent, or
/// when the queue runs dry without dropping any smallest cell whose bound was
/// above it; either way best_q is the maximum inlier count over the root cell.
/// An empty scene returns Termination::queue_exhausted.
ExtractionResult extract(const Problem& problem, const BnbConfig& cfg);

ExtractionResult extract(const ScanSet& scans, const std::vector<ImageObservation>& images,
                         const BnbConfig& cfg);

}  // namespace cbx
