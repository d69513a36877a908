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

#include "uavrisk/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavrisk/errors.hpp"
#include "text_util.hpp"

namespace uavrisk
{

namespace
{

using json = nlohmann::ordered_json;

std::string ttc_field(const std::optional<double> & ttc)
{
  return ttc.has_value() ? detail::format_double(*ttc) : std::string();
}

}  // namespace

std::int64_t AssessmentData::critical_count() const
{
  return static_cast<std::int64_t>(
    std::count_if(records.begin(), records.end(), [](const TtcRecord & r) { return r.critical; }));
}

std::span<const TtcRecord> AssessmentData::records_at(std::int64_t frame) const
{
  const auto lo = std::lower_bound(
    records.begin(), records.end(), frame,
    [](const TtcRecord & r, std::int64_t f) { return r.geometry.frame < f; });
  auto hi = lo;
  while (hi != records.end() && hi->geometry.frame == frame) {
    ++hi;
  }
  return {lo, hi};
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string & path, const std::string & content)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << content;
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

std::vector<Detection> load_annotations_file(const std::string & path, const CategoryMap & map)
{
  const std::string text = read_file(path);
  try {
    return parse_annotations(text, map);
  } catch (const ParseError & e) {
    throw ParseError(path + ": " + e.what(), e.line());
  } catch (const ValidationError & e) {
    throw ValidationError(path + ": " + e.what());
  }
}

AssessmentData assess_detections(const std::vector<Detection> & dets, const RunConfig & cfg)
{
  AssessmentData data;
  if (dets.empty()) {
    data.scale = {cfg.scale_override.value_or(1.0), cfg.fps,
                  cfg.scale_override ? ScaleSource::manual : ScaleSource::estimated};
    return data;
  }

  data.tracks = build_tracks(dets, cfg.categories);

  if (cfg.scale_override.has_value()) {
    if (!(*cfg.scale_override > 0.0)) {
      throw ValidationError("manual scale must be positive");
    }
    data.scale = {*cfg.scale_override, cfg.fps, ScaleSource::manual};
  } else {
    data.scale = estimate_scale(data.tracks, cfg.vehicle_dims, cfg.fps);
  }

  std::map<std::int64_t, std::vector<AgentState>> by_frame;
  for (const auto & track : data.tracks) {
    data.categories_by_id[track.id] = track.category;
    auto states = derive_kinematics(track, data.scale, cfg.stride, cfg.smooth_window);
    for (const auto & s : states) {
      by_frame[s.frame].push_back({track.id, s});
    }
    data.kinematics_by_id[track.id] = std::move(states);
  }

  data.frames.reserve(by_frame.size());
  std::vector<std::vector<AgentState>> frame_states;
  frame_states.reserve(by_frame.size());
  for (auto & [frame, states] : by_frame) {
    std::sort(states.begin(), states.end(),
              [](const AgentState & a, const AgentState & b) { return a.id < b.id; });
    data.frames.push_back(frame);
    frame_states.push_back(std::move(states));
  }

  const AssessParams params{cfg.radius, cfg.ttc_threshold, cfg.ttc_mode};
  std::vector<std::vector<TtcRecord>> per_frame(frame_states.size());

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || frame_states.size() < 2) {
    for (std::size_t i = 0; i < frame_states.size(); ++i) {
      per_frame[i] = assess_frame(frame_states[i], params);
    }
  } else {
    // Frames are independent; results merge in frame order, so the output is
    // identical to the sequential path.
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= frame_states.size()) {
          return;
        }
        per_frame[i] = assess_frame(frame_states[i], params);
      }
    };
    futures.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, worker));
    }
    for (auto & f : futures) {
      f.get();
    }
  }

  for (auto & recs : per_frame) {
    data.records.insert(data.records.end(), recs.begin(), recs.end());
  }
  return data;
}

std::string ttc_records_csv(const AssessmentData & data)
{
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "frame,id_a,id_b,category_a,category_b,distance_m,rel_speed_mps,closing_speed_mps,"
         "ttc_s,critical\n";
  for (const auto & rec : data.records) {
    const auto & g = rec.geometry;
    const auto cat = [&](std::int64_t id) -> const std::string & {
      static const std::string other = "other";
      const auto it = data.categories_by_id.find(id);
      return it != data.categories_by_id.end() ? it->second : other;
    };
    out += std::to_string(g.frame);
    out += ',';
    out += std::to_string(g.id_a);
    out += ',';
    out += std::to_string(g.id_b);
    out += ',';
    out += cat(g.id_a);
    out += ',';
    out += cat(g.id_b);
    out += ',';
    out += detail::format_double(g.distance);
    out += ',';
    out += detail::format_double(g.rel_speed);
    out += ',';
    out += detail::format_double(g.closing_speed);
    out += ',';
    out += ttc_field(rec.ttc);
    out += ',';
    out += rec.critical ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::vector<TtcCsvRow> parse_ttc_records_csv(const std::string & text)
{
  std::vector<TtcCsvRow> rows;
  std::int64_t line_no = 0;
  bool header_seen = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = std::string_view(text).substr(
      pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // header line
      continue;
    }

    const auto fields = detail::split(line, ',');
    if (fields.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 fields", line_no);
    }

    TtcCsvRow row;
    const auto frame = detail::parse_int(fields[0]);
    const auto id_a = detail::parse_int(fields[1]);
    const auto id_b = detail::parse_int(fields[2]);
    const auto distance = detail::parse_double(fields[5]);
    const auto rel_speed = detail::parse_double(fields[6]);
    const auto closing = detail::parse_double(fields[7]);
    if (!frame || !id_a || !id_b || !distance || !rel_speed || !closing) {
      throw ParseError("line " + std::to_string(line_no) + ": non-numeric field", line_no);
    }
    row.frame = *frame;
    row.id_a = *id_a;
    row.id_b = *id_b;
    row.category_a = std::string(detail::trim(fields[3]));
    row.category_b = std::string(detail::trim(fields[4]));
    row.distance = *distance;
    row.rel_speed = *rel_speed;
    row.closing_speed = *closing;
    if (!detail::trim(fields[8]).empty()) {
      const auto ttc = detail::parse_double(fields[8]);
      if (!ttc) {
        throw ParseError("line " + std::to_string(line_no) + ": bad ttc field", line_no);
      }
      row.ttc = *ttc;
    }
    const std::string_view crit = detail::trim(fields[9]);
    if (crit == "true") {
      row.critical = true;
    } else if (crit == "false") {
      row.critical = false;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": bad critical field", line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PairFrameLabels csv_rows_to_labels(const std::vector<TtcCsvRow> & rows)
{
  PairFrameLabels labels;
  for (const auto & row : rows) {
    labels[{row.frame, row.id_a, row.id_b}] = row.critical;
  }
  return labels;
}

std::string macro_profile_json(const AssessmentData & data, double threshold)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["threshold_s"] = threshold;
  json frames = json::array();
  for (const std::int64_t frame : data.frames) {
    const auto profile = macro_profile(data.records_at(frame), threshold, data.categories_by_id);
    if (profile.entries.empty()) {
      continue;
    }
    json fj;
    fj["frame"] = frame;
    json entries = json::array();
    for (const auto & e : profile.entries) {
      entries.push_back({{"id", e.id},
                         {"category", e.category},
                         {"min_ttc_s", e.min_ttc},
                         {"partner_id", e.partner_id}});
    }
    fj["entries"] = std::move(entries);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

std::string micro_profile_json(const AssessmentData & data, std::int64_t id, double threshold)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = id;
  j["threshold_s"] = threshold;
  json frames = json::array();
  for (const std::int64_t frame : data.frames) {
    const auto profile = micro_profile(data.records_at(frame), id, frame, threshold);
    if (profile.neighbors.empty()) {
      continue;
    }
    json fj;
    fj["frame"] = frame;
    json neighbors = json::array();
    for (const auto & n : profile.neighbors) {
      neighbors.push_back(
        {{"partner_id", n.partner_id}, {"ttc_s", n.ttc}, {"distance_m", n.distance}});
    }
    fj["neighbors"] = std::move(neighbors);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

std::string heatmap_csv(const HeatmapGrid & grid)
{
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "# origin_x=" + detail::format_double(grid.origin.x) +
         " origin_y=" + detail::format_double(grid.origin.y) +
         " cell_size=" + detail::format_double(grid.cell_size) + "\n";
  out += "i,j,intensity\n";
  for (const auto & [cell, v] : grid.cells) {
    out += std::to_string(cell.first);
    out += ',';
    out += std::to_string(cell.second);
    out += ',';
    out += detail::format_double(v);
    out += '\n';
  }
  return out;
}

std::string pair_stats_json(const PairStats & stats)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  const std::int64_t total = stats.total();
  const std::int64_t non_car_car = stats.total_excluding_car_car();
  j["total_critical"] = total;
  j["vehicle_vehicle_count"] = stats.vehicle_vehicle_count();
  j["vehicle_vehicle_percent"] =
    total > 0 ? 100.0 * static_cast<double>(stats.vehicle_vehicle_count()) /
                  static_cast<double>(total)
              : 0.0;
  json pairs = json::array();
  for (const auto & e : stats.entries) {
    json ej;
    ej["pair"] = e.category_a + "-" + e.category_b;
    ej["count"] = e.count;
    ej["percent"] =
      total > 0 ? 100.0 * static_cast<double>(e.count) / static_cast<double>(total) : 0.0;
    if (!(e.category_a == "car" && e.category_b == "car")) {
      ej["percent_excluding_car_car"] =
        non_car_car > 0
          ? 100.0 * static_cast<double>(e.count) / static_cast<double>(non_car_car)
          : 0.0;
    }
    pairs.push_back(std::move(ej));
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

std::string mota_json(const MotaResult & result)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["gt_count"] = result.gt_count;
  j["misses"] = result.misses;
  j["false_positives"] = result.false_positives;
  j["id_switches"] = result.id_switches;
  j["mota"] = result.mota;
  return j.dump(2) + "\n";
}

std::string confusion_json(const ConfusionCounts & counts)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tp"] = counts.tp;
  j["fp"] = counts.fp;
  j["tn"] = counts.tn;
  j["fn"] = counts.fn;
  j["accuracy"] = counts.accuracy();
  j["tpr"] = counts.tpr();
  j["fpr"] = counts.fpr();
  j["fnr"] = counts.fnr();
  return j.dump(2) + "\n";
}

std::string predictions_json(const std::vector<PredictionRow> & rows)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  json preds = json::array();
  for (const auto & row : rows) {
    preds.push_back({{"id", row.id},
                     {"frame", row.frame},
                     {"prediction", row.prediction == SafetyLabel::risky ? "risky" : "safe"}});
  }
  j["predictions"] = std::move(preds);
  return j.dump(2) + "\n";
}

std::string importance_json(const ForestModel & model, bool include_thresholds)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  const auto ranked = ranked_importances(model);
  json all = json::array();
  for (const auto & e : ranked) {
    all.push_back({{"feature", e.feature}, {"name", e.name}, {"importance", e.importance}});
  }
  j["ranked"] = std::move(all);
  json top5 = json::array();
  for (std::size_t i = 0; i < 5 && i < ranked.size(); ++i) {
    top5.push_back({{"name", ranked[i].name}, {"importance", ranked[i].importance}});
  }
  j["top5"] = std::move(top5);

  if (include_thresholds) {
    // Per-feature split thresholds across all trees, sorted. These values
    // are specific to the analyzed scene.
    std::map<int, std::vector<double>> thresholds;
    for (const auto & tree : model.trees) {
      for (const auto & node : tree.nodes) {
        if (node.feature >= 0) {
          thresholds[node.feature].push_back(node.threshold);
        }
      }
    }
    json tj = json::object();
    const auto & names = feature_names();
    for (auto & [feature, values] : thresholds) {
      std::sort(values.begin(), values.end());
      tj[names[static_cast<std::size_t>(feature)]] = {
        {"splits", values.size()},
        {"min", values.front()},
        {"median", values[values.size() / 2]},
        {"max", values.back()}};
    }
    j["thresholds"] = std::move(tj);
  }
  return j.dump(2) + "\n";
}

AssessSummary run_assess(const RunConfig & cfg)
{
  std::vector<Detection> dets;
  for (const auto & path : cfg.inputs) {
    auto part = load_annotations_file(path, cfg.categories);
    dets.insert(dets.end(), part.begin(), part.end());
  }

  const AssessmentData data = assess_detections(dets, cfg);

  const std::filesystem::path dir(cfg.output_dir);
  write_file((dir / "ttc_records.csv").string(), ttc_records_csv(data));
  write_file((dir / "macro_profile.json").string(), macro_profile_json(data, cfg.ttc_threshold));

  AssessSummary summary;
  summary.frame_count = static_cast<std::int64_t>(data.frames.size());
  summary.user_count = static_cast<std::int64_t>(data.tracks.size());
  summary.record_count = static_cast<std::int64_t>(data.records.size());
  summary.critical_count = data.critical_count();
  return summary;
}

namespace
{

void apply_config_entry(const std::string & key, const std::string & value, RunConfig & cfg)
{
  const auto as_double = [&](const std::string & what) {
    const auto v = detail::parse_double(value);
    if (!v) {
      throw ValidationError("config: " + what + " expects a number, got '" + value + "'");
    }
    return *v;
  };
  const auto as_int = [&](const std::string & what) {
    const auto v = detail::parse_int(value);
    if (!v) {
      throw ValidationError("config: " + what + " expects an integer, got '" + value + "'");
    }
    return *v;
  };

  if (key.rfind("category.", 0) == 0) {
    const auto code = detail::parse_int(key.substr(9));
    if (!code) {
      throw ValidationError("config: bad category code in '" + key + "'");
    }
    cfg.categories.set(*code, value);
    return;
  }

  if (key == "fps") {
    cfg.fps = as_double(key);
  } else if (key == "scale") {
    cfg.scale_override = as_double(key);
  } else if (key == "stride") {
    cfg.stride = static_cast<int>(as_int(key));
  } else if (key == "smooth-window") {
    cfg.smooth_window = static_cast<int>(as_int(key));
  } else if (key == "veh-length") {
    cfg.vehicle_dims.length_m = as_double(key);
  } else if (key == "veh-width") {
    cfg.vehicle_dims.width_m = as_double(key);
  } else if (key == "ttc-threshold") {
    cfg.ttc_threshold = as_double(key);
  } else if (key == "radius") {
    cfg.radius = as_double(key);
  } else if (key == "ttc-mode") {
    if (value == "projected") {
      cfg.ttc_mode = TtcMode::projected;
    } else if (value == "literal") {
      cfg.ttc_mode = TtcMode::literal;
    } else {
      throw ValidationError("config: ttc-mode must be projected or literal");
    }
  } else if (key == "heatmap-cell") {
    cfg.heatmap_cell = as_double(key);
  } else if (key == "gap-limit") {
    cfg.gap_limit = as_int(key);
  } else if (key == "trees") {
    cfg.forest.tree_count = static_cast<int>(as_int(key));
  } else if (key == "max-depth") {
    cfg.forest.max_depth = static_cast<int>(as_int(key));
  } else if (key == "min-leaf") {
    cfg.forest.min_leaf = static_cast<int>(as_int(key));
  } else if (key == "features-per-split") {
    cfg.forest.features_per_split = static_cast<int>(as_int(key));
  } else if (key == "holdout") {
    cfg.holdout = as_double(key);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(as_int(key));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(as_int(key));
  } else if (key == "out-dir") {
    cfg.output_dir = value;
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

}  // namespace

void apply_config_text(const std::string & text, RunConfig & cfg)
{
  std::int64_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = std::string_view(text).substr(
      pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    }
    apply_config_entry(key, value, cfg);
  }
}

}  // namespace uavrisk
