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

#include "uavrisk/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "uavrisk/errors.hpp"

namespace uavrisk
{

double ConfusionCounts::accuracy() const
{
  const auto n = total();
  return n > 0 ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
}

double ConfusionCounts::tpr() const
{
  return (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

double ConfusionCounts::fpr() const
{
  return (fp + tn) > 0 ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
}

double ConfusionCounts::fnr() const
{
  return (tp + fn) > 0 ? static_cast<double>(fn) / static_cast<double>(tp + fn) : 0.0;
}

double box_iou(const Detection & a, const Detection & b)
{
  const double ix = std::max(
    0.0, std::min(a.bb_left + a.bb_width, b.bb_left + b.bb_width) -
           std::max(a.bb_left, b.bb_left));
  const double iy = std::max(
    0.0, std::min(a.bb_top + a.bb_height, b.bb_top + b.bb_height) -
           std::max(a.bb_top, b.bb_top));
  const double inter = ix * iy;
  const double uni = a.bb_width * a.bb_height + b.bb_width * b.bb_height - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace
{

constexpr double kForbidden = 1e9;

/// Min-cost assignment over a rows x cols cost matrix (rows <= cols),
/// O(rows^2 * cols) shortest augmenting paths with potentials. Returns, per
/// row, the assigned column.
std::vector<int> min_cost_assignment(
  const std::vector<std::vector<double>> & cost, std::size_t rows, std::size_t cols)
{
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0);
  std::vector<double> v(cols + 1, 0.0);
  std::vector<std::size_t> matched_row(cols + 1, 0);  // 1-based; 0 = free
  std::vector<std::size_t> way(cols + 1, 0);

  for (std::size_t i = 1; i <= rows; ++i) {
    matched_row[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_v(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = matched_row[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[matched_row[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched_row[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      matched_row[j0] = matched_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (matched_row[j] != 0) {
      row_to_col[matched_row[j] - 1] = static_cast<int>(j - 1);
    }
  }
  return row_to_col;
}

}  // namespace

FrameMatchResult match_detections(
  std::span<const Detection> gt_frame, std::span<const Detection> hyp_frame,
  MatchState & state, double iou_threshold)
{
  FrameMatchResult result;

  std::vector<bool> gt_used(gt_frame.size(), false);
  std::vector<bool> hyp_used(hyp_frame.size(), false);

  const auto find_gt = [&](std::int64_t id) -> int {
    for (std::size_t i = 0; i < gt_frame.size(); ++i) {
      if (gt_frame[i].id == id) {
        return static_cast<int>(i);
      }
    }
    return -1;
  };
  const auto find_hyp = [&](std::int64_t id) -> int {
    for (std::size_t i = 0; i < hyp_frame.size(); ++i) {
      if (hyp_frame[i].id == id) {
        return static_cast<int>(i);
      }
    }
    return -1;
  };

  // Correspondences from the previous frame persist while they still overlap.
  for (const auto & [gt_id, hyp_id] : state.active) {
    const int gi = find_gt(gt_id);
    const int hi = find_hyp(hyp_id);
    if (gi < 0 || hi < 0) {
      continue;
    }
    if (box_iou(gt_frame[static_cast<std::size_t>(gi)],
                hyp_frame[static_cast<std::size_t>(hi)]) >= iou_threshold) {
      result.matches.emplace_back(gt_id, hyp_id);
      gt_used[static_cast<std::size_t>(gi)] = true;
      hyp_used[static_cast<std::size_t>(hi)] = true;
    }
  }

  // Remaining objects: optimal assignment maximizing total IoU, pairs below
  // the threshold forbidden.
  std::vector<std::size_t> free_gt;
  std::vector<std::size_t> free_hyp;
  for (std::size_t i = 0; i < gt_frame.size(); ++i) {
    if (!gt_used[i]) {
      free_gt.push_back(i);
    }
  }
  for (std::size_t i = 0; i < hyp_frame.size(); ++i) {
    if (!hyp_used[i]) {
      free_hyp.push_back(i);
    }
  }

  if (!free_gt.empty() && !free_hyp.empty()) {
    const bool transposed = free_gt.size() > free_hyp.size();
    const auto & rows = transposed ? free_hyp : free_gt;
    const auto & cols = transposed ? free_gt : free_hyp;

    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto & g = gt_frame[transposed ? cols[c] : rows[r]];
        const auto & h = hyp_frame[transposed ? rows[r] : cols[c]];
        const double iou = box_iou(g, h);
        cost[r][c] = iou >= iou_threshold ? 1.0 - iou : kForbidden;
      }
    }

    const auto assignment = min_cost_assignment(cost, rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int c = assignment[r];
      if (c < 0 || cost[r][static_cast<std::size_t>(c)] >= kForbidden) {
        continue;
      }
      const std::size_t gi = transposed ? cols[static_cast<std::size_t>(c)] : rows[r];
      const std::size_t hi = transposed ? rows[r] : cols[static_cast<std::size_t>(c)];
      result.matches.emplace_back(gt_frame[gi].id, hyp_frame[hi].id);
      gt_used[gi] = true;
      hyp_used[hi] = true;
    }
  }

  result.misses = static_cast<std::int64_t>(std::count(gt_used.begin(), gt_used.end(), false));
  result.false_positives =
    static_cast<std::int64_t>(std::count(hyp_used.begin(), hyp_used.end(), false));

  // An id switch occurs when a ground truth object resumes tracking under a
  // different hypothesis id than it last had.
  std::sort(result.matches.begin(), result.matches.end());
  for (const auto & [gt_id, hyp_id] : result.matches) {
    const auto it = state.last_hyp_for_gt.find(gt_id);
    if (it != state.last_hyp_for_gt.end() && it->second != hyp_id) {
      ++result.id_switches;
    }
    state.last_hyp_for_gt[gt_id] = hyp_id;
  }

  state.active.clear();
  for (const auto & [gt_id, hyp_id] : result.matches) {
    state.active[gt_id] = hyp_id;
  }
  return result;
}

MotaResult compute_mota(
  const std::vector<Detection> & gt, const std::vector<Detection> & hyp, double iou_threshold)
{
  if (gt.empty()) {
    throw ValidationError("MOTA is undefined for empty ground truth");
  }

  std::map<std::int64_t, std::vector<Detection>> gt_frames;
  std::map<std::int64_t, std::vector<Detection>> hyp_frames;
  for (const auto & d : gt) {
    gt_frames[d.frame].push_back(d);
  }
  for (const auto & d : hyp) {
    hyp_frames[d.frame].push_back(d);
  }

  std::set<std::int64_t> frames;
  for (const auto & [f, v] : gt_frames) {
    frames.insert(f);
  }
  for (const auto & [f, v] : hyp_frames) {
    frames.insert(f);
  }

  MotaResult result;
  result.gt_count = static_cast<std::int64_t>(gt.size());

  MatchState state;
  static const std::vector<Detection> empty;
  for (const std::int64_t f : frames) {
    const auto git = gt_frames.find(f);
    const auto hit = hyp_frames.find(f);
    const auto & gf = git != gt_frames.end() ? git->second : empty;
    const auto & hf = hit != hyp_frames.end() ? hit->second : empty;
    const auto frame_result = match_detections(gf, hf, state, iou_threshold);
    result.misses += frame_result.misses;
    result.false_positives += frame_result.false_positives;
    result.id_switches += frame_result.id_switches;
  }

  result.mota = 1.0 - static_cast<double>(result.misses + result.false_positives +
                                          result.id_switches) /
                        static_cast<double>(result.gt_count);
  return result;
}

ConfusionCounts risk_confusion(const PairFrameLabels & gt, const PairFrameLabels & predicted)
{
  const auto describe = [](const PairFrameKey & key) {
    std::ostringstream os;
    os << "(frame " << std::get<0>(key) << ", " << std::get<1>(key) << "-" << std::get<2>(key)
       << ")";
    return os.str();
  };

  std::vector<std::string> missing;
  for (const auto & [key, label] : gt) {
    if (predicted.count(key) == 0) {
      missing.push_back("predicted set lacks " + describe(key));
    }
  }
  for (const auto & [key, label] : predicted) {
    if (gt.count(key) == 0) {
      missing.push_back("ground truth lacks " + describe(key));
    }
  }
  if (!missing.empty()) {
    constexpr std::size_t kMaxListed = 10;
    std::string msg = "label key spaces differ: ";
    for (std::size_t i = 0; i < missing.size() && i < kMaxListed; ++i) {
      msg += (i > 0 ? "; " : "") + missing[i];
    }
    if (missing.size() > kMaxListed) {
      msg += "; and " + std::to_string(missing.size() - kMaxListed) + " more";
    }
    throw ValidationError(msg);
  }

  ConfusionCounts counts;
  for (const auto & [key, truth] : gt) {
    const bool pred = predicted.at(key);
    if (truth && pred) {
      ++counts.tp;
    } else if (!truth && pred) {
      ++counts.fp;
    } else if (!truth && !pred) {
      ++counts.tn;
    } else {
      ++counts.fn;
    }
  }
  return counts;
}

}  // namespace uavrisk
