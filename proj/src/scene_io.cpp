#include "cbextract/scene_io.hpp"

#include <fstream>
#include <set>

#include "cbextract/errors.hpp"

namespace cbx {

using nlohmann::json;

namespace {

constexpr const char* kSceneFormat = "cbextract-scene";
constexpr const char* kResultFormat = "cbextract-result";

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 to_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector, got " + j.dump());
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json transform_json(const RigidTransform& T) {
  return json{{"rotation", vec(T.rot.v)}, {"translation", vec(T.t)}};
}

RigidTransform to_transform(const json& j) {
  return RigidTransform{AngleAxis{to_vec(j.at("rotation"))}, to_vec(j.at("translation"))};
}

BoardPose to_pose(const json& j) {
  BoardPose pose;
  if (j.contains("matrix")) {
    const json& m = j.at("matrix");
    if (!m.is_array() || m.size() != 3) throw ConfigError("pose matrix must have 3 rows");
    for (int r = 0; r < 3; ++r) pose.r_bc.row(r) = to_vec(m[r]).transpose();
  } else {
    pose.r_bc = angle_axis_to_matrix(AngleAxis{to_vec(j.at("rotation"))});
  }
  pose.t_bc = to_vec(j.at("translation"));
  return pose;
}

json pose_json(const BoardPose& pose) {
  return json{{"rotation", vec(matrix_to_angle_axis(pose.r_bc).v)}, {"translation", vec(pose.t_bc)}};
}

void check_header(const json& j, const char* format) {
  if (!j.is_object()) throw ConfigError("top-level JSON value must be an object");
  if (j.value("format", std::string()) != format) {
    throw ConfigError(std::string("not a ") + format + " file");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw ConfigError("unsupported " + std::string(format) + " version");
  }
}

// nlohmann type errors surface as ConfigError so callers see one error kind.
template <typename F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

SceneFile SceneFile::from(const SynthScene& scene) {
  return SceneFile{scene.scans, scene.images, scene.labels, scene.gt};
}

void ResultFile::check_indices(const ScanSet& scans) const {
  if (inliers.size() != scans.size()) throw ConfigError("result and scene differ in scan count");
  for (std::size_t i = 0; i < inliers.size(); ++i) {
    for (const Inlier& in : inliers[i]) {
      if (in.index < 0 || static_cast<std::size_t>(in.index) >= scans[i].size()) {
        throw ConfigError("inlier index out of range in scan " + std::to_string(i));
      }
    }
  }
}

json scene_to_json(const SceneFile& scene) {
  json scans = json::array();
  for (const Scan& s : scene.scans) {
    json pts = json::array();
    for (const auto& p : s) pts.push_back(vec(p));
    scans.push_back(std::move(pts));
  }
  json images = json::array();
  for (const ImageObservation& img : scene.images) {
    json boards = json::array();
    for (const BoardObservation& b : img.boards) {
      boards.push_back(
          {{"nx", vec(b.nx)}, {"ny", vec(b.ny)}, {"nz", vec(b.nz)}, {"dx", b.dx}, {"dy", b.dy}});
    }
    images.push_back({{"boards", std::move(boards)}});
  }
  json j{{"format", kSceneFormat}, {"version", kFormatVersion}, {"scans", scans}, {"images", images}};
  if (scene.labels) j["labels"] = *scene.labels;
  if (scene.gt) j["ground_truth"] = transform_json(*scene.gt);
  return j;
}

SceneFile scene_from_json(const json& j) {
  return parsing("scene", [&] {
    check_header(j, kSceneFormat);
    SceneFile scene;
    for (const json& s : j.at("scans")) {
      Scan scan;
      for (const json& p : s) scan.push_back(to_vec(p));
      scene.scans.push_back(std::move(scan));
    }
    for (const json& img : j.at("images")) {
      ImageObservation obs;
      for (const json& b : img.at("boards")) {
        const double dx = b.at("dx").get<double>();
        const double dy = b.at("dy").get<double>();
        BoardObservation board = b.contains("pose")
                                     ? normals_from_pose(to_pose(b.at("pose")), dx, dy)
                                     : BoardObservation{to_vec(b.at("nx")), to_vec(b.at("ny")),
                                                        to_vec(b.at("nz")), dx, dy};
        board.validate();
        obs.boards.push_back(board);
      }
      scene.images.push_back(std::move(obs));
    }
    if (scene.scans.size() != scene.images.size()) {
      throw ConfigError("scene has different numbers of scans and images");
    }
    if (j.contains("labels")) {
      auto labels = j.at("labels").get<std::vector<std::vector<int>>>();
      if (labels.size() != scene.scans.size()) throw ConfigError("labels do not match scans");
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].size() != scene.scans[i].size()) {
          throw ConfigError("labels do not match scan " + std::to_string(i));
        }
        for (int l : labels[i]) {
          if (l < -1 || l >= static_cast<int>(scene.images[i].boards.size())) {
            throw ConfigError("label refers to a missing board in scan " + std::to_string(i));
          }
        }
      }
      scene.labels = std::move(labels);
    }
    if (j.contains("ground_truth")) scene.gt = to_transform(j.at("ground_truth"));
    return scene;
  });
}

PosesFile poses_from_json(const json& j) {
  return parsing("poses", [&] {
    if (j.value("version", -1) != kFormatVersion) throw ConfigError("unsupported poses version");
    PosesFile poses;
    for (const json& img : j.at("images")) {
      ImagePoses boards;
      for (const json& b : img.at("boards")) boards.push_back(to_pose(b));
      poses.push_back(std::move(boards));
    }
    return poses;
  });
}

json poses_to_json(const PosesFile& poses) {
  json images = json::array();
  for (const ImagePoses& img : poses) {
    json boards = json::array();
    for (const BoardPose& p : img) boards.push_back(pose_json(p));
    images.push_back({{"boards", boards}});
  }
  return json{{"version", kFormatVersion}, {"images", images}};
}

SynthConfig synth_config_from_json(const json& j) {
  return parsing("synthesis config", [&] {
    static const std::set<std::string> known{
        "ground_truth", "fan_start", "fan_end",  "fan_step",     "wall_distance", "wall_intersection",
        "board_dx",     "board_dy",  "range_noise", "normal_noise", "seed"};
    if (!j.is_object()) throw ConfigError("synthesis config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (!known.count(key)) throw ConfigError("unknown synthesis config key '" + key + "'");
    }
    SynthConfig cfg;
    if (j.contains("ground_truth")) cfg.gt = to_transform(j.at("ground_truth"));
    cfg.fan_start = j.value("fan_start", cfg.fan_start);
    cfg.fan_end = j.value("fan_end", cfg.fan_end);
    cfg.fan_step = j.value("fan_step", cfg.fan_step);
    cfg.room.wall_distance = j.value("wall_distance", cfg.room.wall_distance);
    cfg.room.wall_intersection = j.value("wall_intersection", cfg.room.wall_intersection);
    cfg.board_dx = j.value("board_dx", cfg.board_dx);
    cfg.board_dy = j.value("board_dy", cfg.board_dy);
    cfg.range_noise = j.value("range_noise", cfg.range_noise);
    cfg.normal_noise = j.value("normal_noise", cfg.normal_noise);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
  });
}

json synth_config_to_json(const SynthConfig& cfg) {
  return json{{"ground_truth", transform_json(cfg.gt)},
              {"fan_start", cfg.fan_start},
              {"fan_end", cfg.fan_end},
              {"fan_step", cfg.fan_step},
              {"wall_distance", cfg.room.wall_distance},
              {"wall_intersection", cfg.room.wall_intersection},
              {"board_dx", cfg.board_dx},
              {"board_dy", cfg.board_dy},
              {"range_noise", cfg.range_noise},
              {"normal_noise", cfg.normal_noise},
              {"seed", cfg.seed}};
}

json result_to_json(const ExtractionResult& result, const BnbConfig& cfg) {
  json inliers = json::array();
  for (const auto& scan : result.inliers) {
    json row = json::array();
    for (const Inlier& in : scan) row.push_back({in.index, in.board});
    inliers.push_back(std::move(row));
  }
  json rows = json::array();
  for (const TraceRecord& t : result.trace) {
    rows.push_back({t.iteration, t.best_q, t.popped_upper, t.queue_size});
  }
  // Worker count is deliberately absent: results do not depend on it.
  json config{{"eps", cfg.eps},
              {"rot_half", cfg.init_rot_half},
              {"trans_half", cfg.init_trans_half},
              {"mode", to_string(cfg.mode)},
              {"push_rule", to_string(cfg.push_rule)},
              {"max_iterations", cfg.max_iterations ? json(*cfg.max_iterations) : json(nullptr)},
              {"stall_window", cfg.stall_window ? json(*cfg.stall_window) : json(nullptr)},
              {"min_inliers", cfg.min_inliers}};
  return json{{"format", kResultFormat},
              {"version", kFormatVersion},
              {"config", config},
              {"best", transform_json(result.best)},
              {"best_q", result.best_q},
              {"terminated_by", to_string(result.terminated_by)},
              {"iterations", result.iterations},
              {"best_iteration", result.best_iteration},
              {"cells_pushed", result.cells_pushed},
              {"cells_evaluated", result.cells_evaluated},
              {"inliers", inliers},
              {"trace", {{"columns", {"iteration", "best_q", "popped_upper", "queue_size"}},
                         {"rows", rows}}}};
}

ResultFile result_from_json(const json& j) {
  return parsing("result", [&] {
    check_header(j, kResultFormat);
    ResultFile r;
    r.best = to_transform(j.at("best"));
    r.best_q = j.at("best_q").get<int>();
    r.terminated_by = j.at("terminated_by").get<std::string>();
    r.iterations = j.at("iterations").get<std::int64_t>();
    int total = 0;
    for (const json& scan : j.at("inliers")) {
      std::vector<Inlier> row;
      for (const json& e : scan) row.push_back(Inlier{e.at(0).get<int>(), e.at(1).get<int>()});
      total += static_cast<int>(row.size());
      r.inliers.push_back(std::move(row));
    }
    if (total != r.best_q) throw ConfigError("inlier list does not match best_q");
    for (const json& row : j.at("trace").at("rows")) {
      r.trace.push_back(TraceRecord{row.at(0).get<std::int64_t>(), row.at(1).get<int>(),
                                    row.at(2).get<int>(), row.at(3).get<std::int64_t>()});
    }
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      if (r.trace[k].best_q < r.trace[k - 1].best_q) {
        throw ConfigError("trace incumbent decreases at iteration " +
                          std::to_string(r.trace[k].iteration));
      }
      if (r.trace[k].popped_upper > r.trace[k - 1].popped_upper) {
        throw ConfigError("trace bound increases at iteration " +
                          std::to_string(r.trace[k].iteration));
      }
    }
    return r;
  });
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j, int indent) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(indent) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace cbx
