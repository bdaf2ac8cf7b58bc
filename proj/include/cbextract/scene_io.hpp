#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cbextract/bnb.hpp"
#include "cbextract/synth.hpp"

namespace cbx {

inline constexpr int kFormatVersion = 1;

/// Scans, board observations and optional ground truth for one problem.
///
/// On disk (JSON, version 1):
///   {"format": "cbextract-scene", "version": 1,
///    "scans":  [[[x, y, z], ...], ...],
///    "images": [{"boards": [{"nx": [..], "ny": [..], "nz": [..], "dx": .., "dy": ..}]}],
///    "labels": [[-1 | board, ...], ...],                    (optional)
///    "ground_truth": {"rotation": [..], "translation": [..]}}  (optional)
/// A board may instead be given as {"pose": {...}, "dx": .., "dy": ..}; it is
/// converted to normals on read. Rotations are angle-axis vectors in radians.
struct SceneFile {
  ScanSet scans;
  std::vector<ImageObservation> images;
  std::optional<std::vector<std::vector<int>>> labels;
  std::optional<RigidTransform> gt;

  static SceneFile from(const SynthScene& scene);
};

/// Board poses per image, as consumed by `simulate` and `normals`:
///   {"version": 1, "images": [{"boards": [{"rotation": [..], "translation": [..]}]}]}
/// "rotation" is an angle-axis vector (rad); a "matrix" of three rows may be
/// given instead.
using PosesFile = std::vector<ImagePoses>;

/// Read-back form of a result file.
struct ResultFile {
  RigidTransform best;
  int best_q = 0;
  std::string terminated_by;
  std::int64_t iterations = 0;
  std::vector<std::vector<Inlier>> inliers;
  std::vector<TraceRecord> trace;

  /// Throws ConfigError if an inlier index falls outside its scan.
  void check_indices(const ScanSet& scans) const;
};

nlohmann::json scene_to_json(const SceneFile& scene);
SceneFile scene_from_json(const nlohmann::json& j);

PosesFile poses_from_json(const nlohmann::json& j);
nlohmann::json poses_to_json(const PosesFile& poses);

/// Synthesis settings. Every key is optional and defaults to SynthConfig{};
/// angles are in radians. Unknown keys are rejected.
SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json synth_config_to_json(const SynthConfig& cfg);

nlohmann::json result_to_json(const ExtractionResult& result, const BnbConfig& cfg);
/// Throws ConfigError if the trace is not monotone (incumbent non-decreasing,
/// popped bound non-increasing) or the file is malformed.
ResultFile result_from_json(const nlohmann::json& j);

/// Throws IoError if the file cannot be opened, ConfigError if it is not JSON.
nlohmann::json read_json(const std::filesystem::path& path);
/// Writes `j.dump(indent)` plus a trailing newline; throws IoError on failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& j, int indent = 1);

}  // namespace cbx
