// Copyright 2026 The uavrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end orchestration: annotations -> tracks -> calibration ->
// kinematics -> per-frame TTC records, plus the serialized report formats
// the command line tool writes. All outputs are byte-deterministic for a
// given configuration and input.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavrisk/calibration.hpp"
#include "uavrisk/evaluation.hpp"
#include "uavrisk/features.hpp"
#include "uavrisk/forest.hpp"
#include "uavrisk/risk_profiles.hpp"
#include "uavrisk/trajectory_io.hpp"
#include "uavrisk/ttc.hpp"

namespace uavrisk
{

/// Version stamped into every CSV/JSON artifact as a schema_version field.
inline constexpr int kSchemaVersion = 1;

struct RunConfig
{
  std::vector<std::string> inputs;  // annotation file paths, concatenated
  std::string output_dir{"."};
  double fps{30.0};
  std::optional<double> scale_override;  // m/px; bypasses estimation
  int stride{1};
  int smooth_window{5};
  VehicleDims vehicle_dims;
  double ttc_threshold{kDefaultTtcThreshold};
  double radius{kDefaultPairRadius};
  TtcMode ttc_mode{TtcMode::projected};
  double heatmap_cell{1.0};  // meters
  std::int64_t gap_limit{5};
  ForestParams forest;
  double holdout{0.2};
  std::uint64_t seed{0};
  int threads{1};
  CategoryMap categories{CategoryMap::visdrone_defaults()};
};

/// In-memory result of the assessment pipeline.
struct AssessmentData
{
  SceneScale scale;
  std::vector<Track> tracks;
  std::map<std::int64_t, std::string> categories_by_id;
  std::map<std::int64_t, std::vector<KinematicState>> kinematics_by_id;
  std::vector<std::int64_t> frames;  // frames holding at least one state
  std::vector<TtcRecord> records;    // frame-major, (id_a, id_b) within a frame

  [[nodiscard]] std::int64_t critical_count() const;
  /// Records belonging to one frame, as a span into `records`.
  [[nodiscard]] std::span<const TtcRecord> records_at(std::int64_t frame) const;
};

/// Reads and parses one annotation file; parse errors are rethrown with the
/// file path and line prefixed to the message.
std::vector<Detection> load_annotations_file(const std::string & path, const CategoryMap & map);

/// Runs the pipeline on already-parsed detections. Empty input yields an
/// empty result. Frames are processed data-parallel when cfg.threads > 1;
/// the output is identical regardless.
AssessmentData assess_detections(const std::vector<Detection> & dets, const RunConfig & cfg);

// --- serialized artifact formats -----------------------------------------

std::string ttc_records_csv(const AssessmentData & data);

/// Row of a TTC record CSV, as read back by parse_ttc_records_csv.
struct TtcCsvRow
{
  std::int64_t frame{0};
  std::int64_t id_a{0};
  std::int64_t id_b{0};
  std::string category_a;
  std::string category_b;
  double distance{0.0};
  double rel_speed{0.0};
  double closing_speed{0.0};
  std::optional<double> ttc;
  bool critical{false};
};
std::vector<TtcCsvRow> parse_ttc_records_csv(const std::string & text);

/// Pair-frame criticality labels of a record CSV, keyed (frame, id_a, id_b).
PairFrameLabels csv_rows_to_labels(const std::vector<TtcCsvRow> & rows);

std::string macro_profile_json(const AssessmentData & data, double threshold);
std::string micro_profile_json(const AssessmentData & data, std::int64_t id, double threshold);
std::string heatmap_csv(const HeatmapGrid & grid);
std::string pair_stats_json(const PairStats & stats);
std::string mota_json(const MotaResult & result);
std::string confusion_json(const ConfusionCounts & counts);

struct PredictionRow
{
  std::int64_t id{0};
  std::int64_t frame{0};
  SafetyLabel prediction{SafetyLabel::safe};
};
std::string predictions_json(const std::vector<PredictionRow> & rows);

/// Ranked Gini importances with a top-5 section. Learned split thresholds
/// are scene-specific, so they are only included on request.
std::string importance_json(const ForestModel & model, bool include_thresholds = false);

// --- filesystem-facing entry points (used by the CLI) ---------------------

struct AssessSummary
{
  std::int64_t frame_count{0};
  std::int64_t user_count{0};
  std::int64_t record_count{0};
  std::int64_t critical_count{0};
};

/// Loads cfg.inputs, runs the pipeline, and writes ttc_records.csv and
/// macro_profile.json into cfg.output_dir.
AssessSummary run_assess(const RunConfig & cfg);

void write_file(const std::string & path, const std::string & content);
std::string read_file(const std::string & path);

/// Flat key=value configuration text (lines of `key = value`, `#` comments).
/// Keys mirror the CLI flag names without the leading dashes; `category.<code>`
/// entries override the category map. Unknown keys are rejected.
void apply_config_text(const std::string & text, RunConfig & cfg);

}  // namespace uavrisk
