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

#include "uavrisk/trajectory_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "uavrisk/errors.hpp"
#include "text_util.hpp"

namespace uavrisk
{

namespace
{

constexpr int kFieldCount = 10;

[[noreturn]] void malformed(std::int64_t line, const std::string & what)
{
  throw ParseError("line " + std::to_string(line) + ": " + what, line);
}

}  // namespace

const std::vector<std::string> & CategoryMap::known_names()
{
  static const std::vector<std::string> names = {
    "pedestrian", "bicycle", "car", "van", "truck", "bus", "motor", "ignored", "other"};
  return names;
}

CategoryMap CategoryMap::visdrone_defaults()
{
  CategoryMap map;
  map.table_ = {
    {0, "ignored"}, {1, "pedestrian"}, {3, "bicycle"}, {4, "car"},
    {5, "van"},     {6, "truck"},      {9, "bus"},     {10, "motor"}};
  return map;
}

void CategoryMap::set(std::int64_t code, const std::string & name)
{
  const auto & names = known_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ValidationError("unknown category name '" + name + "' for code " +
                          std::to_string(code));
  }
  table_[code] = name;
}

const std::string & CategoryMap::name_for(std::int64_t code) const
{
  static const std::string other = "other";
  const auto it = table_.find(code);
  return it != table_.end() ? it->second : other;
}

bool CategoryMap::has(std::int64_t code) const
{
  return table_.count(code) > 0;
}

bool CategoryMap::is_ignored(std::int64_t code) const
{
  return name_for(code) == "ignored";
}

std::vector<Detection> parse_annotations(std::string_view text, const CategoryMap & map)
{
  std::vector<Detection> out;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;

  std::int64_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
      text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = detail::trim(raw);
    if (line.empty()) {
      continue;
    }

    const auto fields = detail::split(line, ',');
    if (fields.size() != kFieldCount) {
      malformed(line_no, "expected " + std::to_string(kFieldCount) + " fields, got " +
                           std::to_string(fields.size()));
    }

    Detection d;
    const auto frame = detail::parse_int(fields[0]);
    const auto id = detail::parse_int(fields[1]);
    const auto left = detail::parse_double(fields[2]);
    const auto top = detail::parse_double(fields[3]);
    const auto width = detail::parse_double(fields[4]);
    const auto height = detail::parse_double(fields[5]);
    const auto score = detail::parse_double(fields[6]);
    const auto category = detail::parse_int(fields[7]);
    const auto truncation = detail::parse_int(fields[8]);
    const auto occlusion = detail::parse_int(fields[9]);

    if (!frame || !id || !left || !top || !width || !height || !score || !category ||
        !truncation || !occlusion) {
      malformed(line_no, "non-numeric field");
    }
    if (*frame < 1) {
      malformed(line_no, "frame index must be >= 1");
    }
    if (*id < 0) {
      malformed(line_no, "identity must be >= 0");
    }
    if (*width <= 0.0 || *height <= 0.0) {
      malformed(line_no, "non-positive box dimensions");
    }

    if (map.is_ignored(*category)) {
      continue;
    }

    d.frame = *frame;
    d.id = *id;
    d.bb_left = *left;
    d.bb_top = *top;
    d.bb_width = *width;
    d.bb_height = *height;
    d.score = *score;
    d.category = *category;
    d.truncation = *truncation;
    d.occlusion = *occlusion;

    if (!seen.insert({d.frame, d.id}).second) {
      throw ValidationError("duplicate detection for frame " + std::to_string(d.frame) +
                            ", id " + std::to_string(d.id) + " at line " +
                            std::to_string(line_no));
    }
    out.push_back(d);
  }
  return out;
}

std::string serialize_annotations(const std::vector<Detection> & dets)
{
  std::string out;
  for (const auto & d : dets) {
    out += std::to_string(d.frame);
    out += ',';
    out += std::to_string(d.id);
    out += ',';
    out += detail::format_double(d.bb_left);
    out += ',';
    out += detail::format_double(d.bb_top);
    out += ',';
    out += detail::format_double(d.bb_width);
    out += ',';
    out += detail::format_double(d.bb_height);
    out += ',';
    out += detail::format_double(d.score);
    out += ',';
    out += std::to_string(d.category);
    out += ',';
    out += std::to_string(d.truncation);
    out += ',';
    out += std::to_string(d.occlusion);
    out += '\n';
  }
  return out;
}

std::vector<Track> build_tracks(const std::vector<Detection> & dets, const CategoryMap & map)
{
  std::map<std::int64_t, std::vector<const Detection *>> by_id;
  for (const auto & d : dets) {
    by_id[d.id].push_back(&d);
  }

  std::vector<Track> tracks;
  tracks.reserve(by_id.size());
  for (auto & [id, group] : by_id) {
    std::sort(group.begin(), group.end(), [](const Detection * a, const Detection * b) {
      return a->frame < b->frame;
    });

    // Dominant category: most frequent code, ties to the smallest code.
    std::map<std::int64_t, std::int64_t> code_counts;
    for (const auto * d : group) {
      ++code_counts[d->category];
    }
    std::int64_t best_code = group.front()->category;
    std::int64_t best_count = 0;
    for (const auto & [code, count] : code_counts) {
      if (count > best_count) {
        best_code = code;
        best_count = count;
      }
    }

    Track track;
    track.id = id;
    track.category = map.name_for(best_code);
    track.samples.reserve(group.size());
    for (const auto * d : group) {
      const Vec2 c = d->center_px();
      track.samples.push_back({d->frame, c.x, c.y, d->bb_width, d->bb_height});
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

DatasetReport validate_dataset(
  const std::vector<Detection> & dets, const CategoryMap & map, std::int64_t gap_limit)
{
  DatasetReport report;

  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::set<std::pair<std::int64_t, std::int64_t>> reported;
  std::map<std::int64_t, std::vector<std::int64_t>> frames_by_id;
  std::set<std::int64_t> unknown;

  for (const auto & d : dets) {
    const std::pair<std::int64_t, std::int64_t> key{d.frame, d.id};
    if (!seen.insert(key).second && reported.insert(key).second) {
      report.duplicates.push_back({d.frame, d.id});
    }
    frames_by_id[d.id].push_back(d.frame);
    if (!map.has(d.category)) {
      unknown.insert(d.category);
    }
  }

  for (auto & [id, frames] : frames_by_id) {
    std::sort(frames.begin(), frames.end());
    for (std::size_t i = 1; i < frames.size(); ++i) {
      const std::int64_t gap = frames[i] - frames[i - 1];
      if (gap > gap_limit) {
        report.gaps.push_back({id, frames[i - 1], frames[i], gap});
      }
    }
  }

  report.unknown_categories.assign(unknown.begin(), unknown.end());
  return report;
}

}  // namespace uavrisk
