#include "cbextract/bnb.hpp"

#include <algorithm>
#include <array>

#include "cbextract/errors.hpp"
#include "cbextract/parallel.hpp"

namespace cbx {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::bound_met: return "bound_met";
    case Termination::max_iterations: return "max_iterations";
    case Termination::stall: return "stall";
    case Termination::queue_exhausted: return "queue_exhausted";
  }
  return "unknown";
}

std::string_view to_string(BoundMode m) { return m == BoundMode::loose ? "loose" : "tight"; }

std::string_view to_string(PushRule r) {
  return r == PushRule::geq ? "geq" : "strictly_greater";
}

void BnbConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(init_rot_half > 0.0)) throw ConfigError("rotation box half size must be positive");
  if (!(init_trans_half > 0.0)) throw ConfigError("translation box half size must be positive");
  if (max_iterations && *max_iterations < 0) throw ConfigError("max iterations must be >= 0");
  if (stall_window && *stall_window <= 0) throw ConfigError("stall window must be positive");
}

void CellQueue::push(const SearchCell& cell) { heap_.push(Entry{cell, next_seq_++}); }

SearchCell CellQueue::pop() {
  SearchCell c = heap_.top().cell;
  heap_.pop();
  return c;
}

namespace {

struct ChildScore {
  int upper = 0;
  int center_q = 0;
};

void fill_inliers(const Problem& problem, ExtractionResult& out) {
  const ObjectiveValue v = evaluate_q_serial(problem, out.best);
  out.best_q = v.count;
  out.labels = v.per_point;
  out.inliers.assign(problem.num_scans(), {});
  for (std::size_t i = 0; i < v.per_point.size(); ++i) {
    for (std::size_t j = 0; j < v.per_point[i].size(); ++j) {
      if (v.per_point[i][j] != kOutlier) {
        out.inliers[i].push_back(Inlier{static_cast<int>(j), v.per_point[i][j]});
      }
    }
  }
}

}  // namespace

ExtractionResult extract(const Problem& problem, const BnbConfig& cfg) {
  cfg.validate();
  if (problem.eps() != cfg.eps) throw ConfigError("problem eps differs from config eps");

  ExtractionResult out;
  if (problem.num_points() == 0) {
    out.terminated_by = Termination::queue_exhausted;
    fill_inliers(problem, out);
    return out;
  }

  const int nt = resolve_threads(cfg.threads);
  const bool geq = cfg.push_rule == PushRule::geq;

  SearchCell root{Box3{Vec3::Zero(), cfg.init_rot_half}, Box3{Vec3::Zero(), cfg.init_trans_half}};
  root.center_q = count_inliers(problem, root.center());
  root.upper = std::max(upper_bound(problem, root, cfg.mode, nt), root.center_q);
  out.cells_evaluated = 1;

  int best_q = root.center_q;
  RigidTransform best = root.center();
  std::int64_t last_change = 0;
  // Smallest cells popped with a bound above the incumbent and not branched.
  std::int64_t unresolved = 0;

  CellQueue queue;
  queue.push(root);
  out.cells_pushed = 1;
  out.terminated_by = Termination::queue_exhausted;

  std::array<SearchCell, 64> children;
  std::array<ChildScore, 64> scores;

  while (!queue.empty()) {
    if (cfg.max_iterations && out.iterations >= *cfg.max_iterations) {
      out.terminated_by = Termination::max_iterations;
      break;
    }
    const SearchCell cell = queue.pop();
    ++out.iterations;
    out.trace.push_back(TraceRecord{out.iterations, best_q, cell.upper,
                                    static_cast<std::int64_t>(queue.size())});

    if (cell.upper <= best_q) {
      out.terminated_by = Termination::bound_met;
      break;
    }
    if (cell.rot.half_len < cfg.min_rot_half && cell.trans.half_len < cfg.min_trans_half) {
      ++unresolved;
      continue;
    }

    const auto rot_children = branch(cell.rot);
    const auto trans_children = branch(cell.trans);
    for (int k = 0; k < 8; ++k) {
      for (int l = 0; l < 8; ++l) children[8 * k + l] = SearchCell{rot_children[k], trans_children[l]};
    }

    // Children are scored independently; queue updates below stay serial and
    // in child order, so the outcome does not depend on the worker count.
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (nt > 1)
    for (int c = 0; c < 64; ++c) {
      scores[c].center_q = count_inliers(problem, children[c].center());
      scores[c].upper = upper_bound(problem, children[c], cfg.mode, 1);
    }
    out.cells_evaluated += 64;

    for (int c = 0; c < 64; ++c) {
      SearchCell& child = children[c];
      child.center_q = scores[c].center_q;
      // The parent bound also covers the child, so the tighter of the two holds.
      child.upper = std::max(std::min(scores[c].upper, cell.upper), child.center_q);
      const bool keep = geq ? child.upper >= best_q : child.upper > best_q;
      if (!keep) continue;
      queue.push(child);
      ++out.cells_pushed;
      if (child.center_q > best_q) {
        best_q = child.center_q;
        best = child.center();
        out.best_iteration = out.iterations;
        last_change = out.iterations;
      }
    }

    if (cfg.stall_window && best_q >= cfg.min_inliers &&
        out.iterations - last_change >= *cfg.stall_window) {
      out.terminated_by = Termination::stall;
      break;
    }
  }

  // Running out of cells is a certificate as strong as a popped bound equal to
  // the incumbent when every discarded cell was bounded by it.
  if (out.terminated_by == Termination::queue_exhausted && unresolved == 0) {
    out.terminated_by = Termination::bound_met;
  }

  out.best = best;
  fill_inliers(problem, out);
  return out;
}

ExtractionResult extract(const ScanSet& scans, const std::vector<ImageObservation>& images,
                         const BnbConfig& cfg) {
  cfg.validate();
  return extract(Problem(scans, images, cfg.eps), cfg);
}

}  // namespace cbx
