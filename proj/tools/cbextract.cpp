// Command-line front end: simulate | extract | normals.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
// 3 numerical degeneracy (including partial success of `normals`).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cbextract/bnb.hpp"
#include "cbextract/errors.hpp"
#include "cbextract/scene_io.hpp"
#include "cbextract/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kIo = 2;
constexpr int kDegenerate = 3;

constexpr double kDeg = M_PI / 180.0;

struct SimulateArgs {
  std::string config;
  std::string poses;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool zero_noise = false;
};

struct ExtractArgs {
  std::string scene;
  std::string out;
  std::string trace_csv;
  double eps = 0.07;
  double rot_half_deg = 15.0;
  double trans_half = 1.0;
  std::string mode = "tight";
  std::string push_rule = "strict";
  std::int64_t max_iter = -1;
  std::int64_t stall = -1;
  int min_inliers = 0;
  int threads = 0;
};

struct NormalsArgs {
  std::string poses;
  std::string out;
  double dx = 0.75;
  double dy = 0.75;
};

int run_simulate(const SimulateArgs& a) {
  cbx::SynthConfig cfg;
  if (!a.config.empty()) cfg = cbx::synth_config_from_json(cbx::read_json(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.zero_noise) {
    cfg.range_noise = 0.0;
    cfg.normal_noise = 0.0;
  }
  const cbx::PosesFile poses = cbx::poses_from_json(cbx::read_json(a.poses));
  const cbx::SynthScene scene = cbx::generate(cfg, poses);
  cbx::write_json(a.out, cbx::scene_to_json(cbx::SceneFile::from(scene)));
  std::cout << "scans: " << scene.scans.size() << "\n"
            << "points: " << scene.point_count() << "\n"
            << "board points: " << scene.board_point_count() << "\n";
  return kOk;
}

void print_truth_match(const cbx::SceneFile& scene, const cbx::ExtractionResult& r) {
  int truth = 0, found = 0, hit = 0, same_board = 0;
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    for (std::size_t j = 0; j < r.labels[i].size(); ++j) {
      const int want = (*scene.labels)[i][j];
      const int got = r.labels[i][j];
      truth += want >= 0;
      found += got >= 0;
      hit += want >= 0 && got >= 0;
      same_board += want >= 0 && got == want;
    }
  }
  std::cout << "precision: " << hit << "/" << found << "\n"
            << "recall: " << hit << "/" << truth << "\n"
            << "board correspondence: " << same_board << "/" << hit << "\n";
}

int run_extract(const ExtractArgs& a) {
  cbx::BnbConfig cfg;
  cfg.eps = a.eps;
  cfg.init_rot_half = a.rot_half_deg * kDeg;
  cfg.init_trans_half = a.trans_half;
  cfg.mode = a.mode == "loose" ? cbx::BoundMode::loose : cbx::BoundMode::tight;
  cfg.push_rule = a.push_rule == "geq" ? cbx::PushRule::geq : cbx::PushRule::strictly_greater;
  if (a.max_iter >= 0) cfg.max_iterations = a.max_iter;
  if (a.stall > 0) cfg.stall_window = a.stall;
  cfg.min_inliers = a.min_inliers;
  cfg.threads = a.threads;
  cfg.validate();

  const cbx::SceneFile scene = cbx::scene_from_json(cbx::read_json(a.scene));
  const cbx::ExtractionResult r = cbx::extract(scene.scans, scene.images, cfg);
  cbx::write_json(a.out, cbx::result_to_json(r, cfg));

  if (!a.trace_csv.empty()) {
    std::ofstream csv(a.trace_csv);
    if (!csv) throw cbx::IoError("cannot write " + a.trace_csv);
    csv << "iteration,best_q,popped_upper,queue_size\n";
    for (const auto& t : r.trace) {
      csv << t.iteration << ',' << t.best_q << ',' << t.popped_upper << ',' << t.queue_size << '\n';
    }
  }

  std::cout << "best_q: " << r.best_q << "\n"
            << "terminated_by: " << cbx::to_string(r.terminated_by) << "\n"
            << "iterations: " << r.iterations << "\n"
            << "best_iteration: " << r.best_iteration << "\n";
  if (scene.labels) print_truth_match(scene, r);
  return kOk;
}

int run_normals(const NormalsArgs& a) {
  if (!(a.dx > 0.0) || !(a.dy > 0.0)) throw cbx::ConfigError("board half dimensions must be positive");
  const cbx::PosesFile poses = cbx::poses_from_json(cbx::read_json(a.poses));
  nlohmann::json images = nlohmann::json::array();
  int degenerate = 0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    nlohmann::json boards = nlohmann::json::array();
    for (const cbx::BoardPose& p : poses[i]) {
      try {
        const cbx::BoardObservation b = cbx::normals_from_pose(p, a.dx, a.dy);
        boards.push_back({{"nx", {b.nx.x(), b.nx.y(), b.nx.z()}},
                          {"ny", {b.ny.x(), b.ny.y(), b.ny.z()}},
                          {"nz", {b.nz.x(), b.nz.y(), b.nz.z()}},
                          {"dx", b.dx},
                          {"dy", b.dy}});
      } catch (const cbx::DegenerateError& e) {
        ++degenerate;
        std::cerr << "image " << i << ": " << e.what() << "\n";
        boards.push_back({{"degenerate", true}, {"error", e.what()}});
      }
    }
    images.push_back({{"boards", boards}});
  }
  cbx::write_json(a.out, {{"format", "cbextract-normals"},
                          {"version", cbx::kFormatVersion},
                          {"images", images}});
  std::cout << "degenerate boards: " << degenerate << "\n";
  return degenerate > 0 ? kDegenerate : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Globally optimal checkerboard extraction from laser scans"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scene file");
  simulate->add_option("--config", sim.config, "Synthesis config (JSON); defaults if omitted");
  simulate->add_option("--poses", sim.poses, "Board poses file (JSON)")->required();
  simulate->add_option("-o,--out", sim.out, "Output scene file")->required();
  simulate->add_option("--seed", sim.seed, "Override the RNG seed");
  simulate->add_flag("--zero-noise", sim.zero_noise, "Disable range and normal noise");

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "Find the optimal inlier set of a scene");
  extract->add_option("--scene", ext.scene, "Scene file (JSON)")->required();
  extract->add_option("-o,--out", ext.out, "Output result file")->required();
  extract->add_option("--eps", ext.eps, "Inlier threshold (m)")->capture_default_str();
  extract->add_option("--rot-half", ext.rot_half_deg, "Root rotation box half size (deg)")
      ->capture_default_str();
  extract->add_option("--trans-half", ext.trans_half, "Root translation box half size (m)")
      ->capture_default_str();
  extract->add_option("--mode", ext.mode, "Bound: tight | loose")
      ->check(CLI::IsMember({"tight", "loose"}))
      ->capture_default_str();
  extract->add_option("--push-rule", ext.push_rule, "Queue gate: strict | geq")
      ->check(CLI::IsMember({"strict", "geq"}))
      ->capture_default_str();
  extract->add_option("--max-iter", ext.max_iter, "Iteration cap (-1 = none)")->capture_default_str();
  extract->add_option("--stall", ext.stall, "Stop after this many iterations without improvement");
  extract->add_option("--min-inliers", ext.min_inliers, "Incumbent size required before --stall applies");
  extract->add_option("--threads", ext.threads, "Worker threads (0 = OpenMP default)");
  extract->add_option("--trace-csv", ext.trace_csv, "Also write the trace as CSV");

  NormalsArgs nrm;
  auto* normals = app.add_subcommand("normals", "Convert board poses to board normals");
  normals->add_option("--poses", nrm.poses, "Board poses file (JSON)")->required();
  normals->add_option("--dx", nrm.dx, "Board half size along x (m)")->capture_default_str();
  normals->add_option("--dy", nrm.dy, "Board half size along y (m)")->capture_default_str();
  normals->add_option("-o,--out", nrm.out, "Output normals file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*extract) return run_extract(ext);
    if (*normals) return run_normals(nrm);
  } catch (const cbx::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const cbx::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const cbx::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
