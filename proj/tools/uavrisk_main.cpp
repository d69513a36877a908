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

// uavrisk: trajectory collision-risk assessment from aerial video
// annotations. Subcommands cover the full pipeline: TTC assessment, risk
// profiles, heatmaps, pair statistics, next-step risk prediction, tracking
// and risk evaluation, and synthetic scenario generation.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 validation or usage error.

#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavrisk/errors.hpp"
#include "uavrisk/pipeline.hpp"
#include "uavrisk/rng.hpp"
#include "uavrisk/synthetic.hpp"

namespace
{

namespace fs = std::filesystem;
using namespace uavrisk;

struct CliOptions
{
  RunConfig cfg;
  std::vector<std::int64_t> micro_ids;
  std::string model_path;
  std::string gt_path;
  std::string hyp_path;
  std::string spec_path;
  std::string out_path;
  double iou_threshold{0.5};
  bool report_thresholds{false};
};

/// Pre-scan for --config so file values are in place before CLI11 parses;
/// flags given on the command line then override them.
void apply_config_file(int argc, char ** argv, RunConfig & cfg)
{
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      apply_config_text(read_file(argv[i + 1]), cfg);
      return;
    }
  }
}

/// Every subcommand accepts --config; its values were applied in the
/// pre-scan, so the option here only consumes the argument.
void add_config_option(CLI::App * cmd)
{
  static std::string ignored;
  cmd->add_option("--config", ignored, "Flat key=value configuration file");
}

void add_dataset_options(CLI::App * cmd, CliOptions & opt)
{
  add_config_option(cmd);
  cmd->add_option("inputs", opt.cfg.inputs, "Annotation file(s)")->required();
  cmd->add_option("--fps", opt.cfg.fps, "Video frame rate")->capture_default_str();
  cmd->add_option("--scale", opt.cfg.scale_override,
                  "Manual meters-per-pixel scale (bypasses estimation)");
  cmd->add_option("--stride", opt.cfg.stride, "Frame stride for velocity differencing")
    ->capture_default_str();
  cmd->add_option("--smooth-window", opt.cfg.smooth_window,
                  "Centered velocity smoothing window (odd)")
    ->capture_default_str();
  cmd->add_option("--veh-length", opt.cfg.vehicle_dims.length_m,
                  "Nominal vehicle length in meters")
    ->capture_default_str();
  cmd->add_option("--veh-width", opt.cfg.vehicle_dims.width_m,
                  "Nominal vehicle width in meters")
    ->capture_default_str();
  cmd->add_option("--ttc-threshold", opt.cfg.ttc_threshold, "Critical TTC threshold in seconds")
    ->capture_default_str();
  cmd->add_option("--radius", opt.cfg.radius, "Neighbor pairing radius in meters")
    ->capture_default_str();
  cmd->add_option_function<std::string>(
       "--ttc-mode",
       [&opt](const std::string & value) {
         opt.cfg.ttc_mode = value == "literal" ? TtcMode::literal : TtcMode::projected;
       },
       "TTC denominator: projected (closing speed) or literal (relative speed)")
    ->check(CLI::IsMember({"projected", "literal"}))
    ->default_str("projected");
  cmd->add_option("--gap-limit", opt.cfg.gap_limit, "Frame-gap limit for dataset warnings")
    ->capture_default_str();
  cmd->add_option("--threads", opt.cfg.threads, "Worker threads for frame assessment")
    ->capture_default_str();
}

void add_output_option(CLI::App * cmd, CliOptions & opt)
{
  cmd->add_option("--out-dir", opt.cfg.output_dir, "Output directory")->capture_default_str();
}

AssessmentData load_and_assess(const CliOptions & opt, bool warn_on_report = true)
{
  std::vector<Detection> dets;
  for (const auto & path : opt.cfg.inputs) {
    auto part = load_annotations_file(path, opt.cfg.categories);
    dets.insert(dets.end(), part.begin(), part.end());
  }
  if (warn_on_report) {
    const auto report = validate_dataset(dets, opt.cfg.categories, opt.cfg.gap_limit);
    for (const auto & gap : report.gaps) {
      std::cerr << "warning: id " << gap.id << " jumps " << gap.gap << " frames ("
                << gap.from_frame << " -> " << gap.to_frame << ")\n";
    }
    for (const auto code : report.unknown_categories) {
      std::cerr << "warning: category code " << code
                << " has no explicit mapping; treated as 'other'\n";
    }
  }
  return assess_detections(dets, opt.cfg);
}

fs::path out_path(const CliOptions & opt, const std::string & name)
{
  return fs::path(opt.cfg.output_dir) / name;
}

int cmd_assess(const CliOptions & opt)
{
  const auto data = load_and_assess(opt);
  write_file(out_path(opt, "ttc_records.csv").string(), ttc_records_csv(data));
  write_file(out_path(opt, "macro_profile.json").string(),
             macro_profile_json(data, opt.cfg.ttc_threshold));
  std::cout << "frames=" << data.frames.size() << " users=" << data.tracks.size()
            << " records=" << data.records.size() << " critical=" << data.critical_count()
            << "\n";
  return 0;
}

int cmd_profile(const CliOptions & opt)
{
  const auto data = load_and_assess(opt);
  write_file(out_path(opt, "macro_profile.json").string(),
             macro_profile_json(data, opt.cfg.ttc_threshold));
  for (const auto id : opt.micro_ids) {
    write_file(out_path(opt, "micro_" + std::to_string(id) + ".json").string(),
               micro_profile_json(data, id, opt.cfg.ttc_threshold));
  }
  std::cout << "profiles written for " << opt.micro_ids.size() << " id(s)\n";
  return 0;
}

int cmd_heatmap(const CliOptions & opt)
{
  const auto data = load_and_assess(opt);
  const auto grid =
    accumulate_heatmap(data.records, opt.cfg.ttc_threshold, opt.cfg.heatmap_cell);
  write_file(out_path(opt, "heatmap.csv").string(), heatmap_csv(grid));
  write_file(out_path(opt, "heatmap.svg").string(), render_heatmap_svg(grid));
  std::cout << "cells=" << grid.cells.size() << " total_intensity=" << grid.total_intensity()
            << "\n";
  return 0;
}

int cmd_stats(const CliOptions & opt)
{
  const auto data = load_and_assess(opt);
  const auto stats =
    pair_category_stats(data.records, opt.cfg.ttc_threshold, data.categories_by_id);
  write_file(out_path(opt, "pair_stats.json").string(), pair_stats_json(stats));
  std::cout << "critical=" << stats.total() << " vehicle-vehicle="
            << stats.vehicle_vehicle_count() << "\n";
  return 0;
}

int cmd_train(const CliOptions & opt)
{
  const auto data = load_and_assess(opt);
  const FeatureExtractor extractor(data.kinematics_by_id, data.categories_by_id, data.records,
                                   opt.cfg.ttc_threshold);
  const auto samples = extractor.build_dataset();
  if (samples.empty()) {
    throw ValidationError("no car has enough history to build training samples");
  }

  // Seeded holdout split.
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = seeded_rng(opt.cfg.seed, 0);
  shuffle_indices(order, rng);
  const auto holdout_size =
    static_cast<std::size_t>(opt.cfg.holdout * static_cast<double>(samples.size()));
  std::vector<FeatureSample> train;
  std::vector<FeatureSample> holdout;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < order.size() - holdout_size ? train : holdout).push_back(samples[order[i]]);
  }

  const auto model = train_forest(train, opt.cfg.forest, opt.cfg.seed);

  std::int64_t correct = 0;
  for (const auto & s : holdout) {
    if (predict(model, s.features.values) == s.label) {
      ++correct;
    }
  }

  write_file(out_path(opt, "model.json").string(), serialize_model(model));
  write_file(out_path(opt, "importance.json").string(),
             importance_json(model, opt.report_thresholds));

  std::cout << "samples=" << samples.size() << " train=" << train.size()
            << " holdout=" << holdout.size();
  if (!holdout.empty()) {
    std::cout << " holdout_accuracy="
              << static_cast<double>(correct) / static_cast<double>(holdout.size());
  }
  std::cout << "\n";
  return 0;
}

int cmd_predict(const CliOptions & opt)
{
  const auto model = parse_model(read_file(opt.model_path));
  const auto data = load_and_assess(opt);
  const FeatureExtractor extractor(data.kinematics_by_id, data.categories_by_id, data.records,
                                   opt.cfg.ttc_threshold);

  std::vector<PredictionRow> rows;
  for (const auto & [id, states] : data.kinematics_by_id) {
    const auto cat = data.categories_by_id.find(id);
    if (cat == data.categories_by_id.end() || cat->second != "car") {
      continue;
    }
    for (const auto & s : states) {
      if (const auto sample = extractor.extract(id, s.frame)) {
        rows.push_back({id, s.frame, predict(model, sample->features.values)});
      }
    }
  }
  write_file(out_path(opt, "predictions.json").string(), predictions_json(rows));
  std::cout << "predictions=" << rows.size() << "\n";
  return 0;
}

int cmd_eval_mot(const CliOptions & opt)
{
  const auto gt = load_annotations_file(opt.gt_path, opt.cfg.categories);
  const auto hyp = load_annotations_file(opt.hyp_path, opt.cfg.categories);
  const auto result = compute_mota(gt, hyp, opt.iou_threshold);
  write_file(out_path(opt, "mota.json").string(), mota_json(result));
  std::cout << "mota=" << result.mota << " fn=" << result.misses
            << " fp=" << result.false_positives << " idsw=" << result.id_switches << "\n";
  return 0;
}

int cmd_eval_risk(const CliOptions & opt)
{
  const auto gt_rows = parse_ttc_records_csv(read_file(opt.gt_path));
  const auto hyp_rows = parse_ttc_records_csv(read_file(opt.hyp_path));
  const auto counts = risk_confusion(csv_rows_to_labels(gt_rows), csv_rows_to_labels(hyp_rows));
  write_file(out_path(opt, "confusion.json").string(), confusion_json(counts));
  std::cout << "accuracy=" << counts.accuracy() << " tpr=" << counts.tpr()
            << " fpr=" << counts.fpr() << "\n";
  return 0;
}

int cmd_synth(const CliOptions & opt)
{
  const auto spec = parse_scenario(read_file(opt.spec_path));
  write_file(opt.out_path, generate_scenario(spec));
  std::cout << "agents=" << spec.agents.size() << " -> " << opt.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Trajectory collision-risk assessment for aerial traffic video"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CliOptions opt;
  std::string config_path;

  try {
    apply_config_file(argc, argv, opt.cfg);
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return dynamic_cast<const IoError *>(&e) != nullptr ? 1 : 2;
  }

  app.add_option("--config", config_path, "Flat key=value configuration file")
    ->configurable(false);

  auto * assess = app.add_subcommand("assess", "Compute TTC records and the macro risk profile");
  add_dataset_options(assess, opt);
  add_output_option(assess, opt);

  auto * profile = app.add_subcommand("profile", "Write macro and per-id micro risk profiles");
  add_dataset_options(profile, opt);
  add_output_option(profile, opt);
  profile->add_option("--id", opt.micro_ids, "Identity for micro_<id>.json (repeatable)");

  auto * heatmap = app.add_subcommand("heatmap", "Accumulate the conflict-location heatmap");
  add_dataset_options(heatmap, opt);
  add_output_option(heatmap, opt);
  heatmap->add_option("--cell-size", opt.cfg.heatmap_cell, "Heatmap cell size in meters")
    ->capture_default_str();

  auto * stats = app.add_subcommand("stats", "Category-pair statistics of critical records");
  add_dataset_options(stats, opt);
  add_output_option(stats, opt);

  auto * train = app.add_subcommand("train", "Train the next-step risk forest");
  add_dataset_options(train, opt);
  add_output_option(train, opt);
  train->add_option("--trees", opt.cfg.forest.tree_count, "Tree count")->capture_default_str();
  train->add_option("--max-depth", opt.cfg.forest.max_depth, "Maximum tree depth")
    ->capture_default_str();
  train->add_option("--min-leaf", opt.cfg.forest.min_leaf, "Minimum samples per leaf")
    ->capture_default_str();
  train->add_option("--features-per-split", opt.cfg.forest.features_per_split,
                    "Random features considered per split")
    ->capture_default_str();
  train->add_option("--holdout", opt.cfg.holdout, "Held-out fraction for evaluation")
    ->capture_default_str();
  train->add_option("--seed", opt.cfg.seed, "Random seed")->capture_default_str();
  train->add_flag("--report-thresholds", opt.report_thresholds,
                  "Include learned split thresholds in importance.json (scene-specific)");

  auto * predict_cmd = app.add_subcommand("predict", "Predict next-step safety per car");
  add_dataset_options(predict_cmd, opt);
  add_output_option(predict_cmd, opt);
  predict_cmd->add_option("--model", opt.model_path, "Trained model JSON")->required();

  auto * eval_mot = app.add_subcommand("eval-mot", "Score tracking quality (MOTA)");
  add_config_option(eval_mot);
  eval_mot->add_option("--gt", opt.gt_path, "Ground-truth annotation file")->required();
  eval_mot->add_option("--hyp", opt.hyp_path, "Hypothesis annotation file")->required();
  eval_mot->add_option("--iou", opt.iou_threshold, "IoU match threshold")
    ->capture_default_str();
  add_output_option(eval_mot, opt);

  auto * eval_risk = app.add_subcommand("eval-risk", "Score criticality labels (confusion)");
  add_config_option(eval_risk);
  eval_risk->add_option("--gt", opt.gt_path, "Ground-truth TTC record CSV")->required();
  eval_risk->add_option("--hyp", opt.hyp_path, "Hypothesis TTC record CSV")->required();
  add_output_option(eval_risk, opt);

  auto * synth = app.add_subcommand("synth", "Generate a synthetic scenario annotation file");
  add_config_option(synth);
  synth->add_option("--spec", opt.spec_path, "Scenario JSON")->required();
  synth->add_option("--out", opt.out_path, "Output annotation file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return 2;
  }

  try {
    if (assess->parsed()) {
      return cmd_assess(opt);
    }
    if (profile->parsed()) {
      return cmd_profile(opt);
    }
    if (heatmap->parsed()) {
      return cmd_heatmap(opt);
    }
    if (stats->parsed()) {
      return cmd_stats(opt);
    }
    if (train->parsed()) {
      return cmd_train(opt);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(opt);
    }
    if (eval_mot->parsed()) {
      return cmd_eval_mot(opt);
    }
    if (eval_risk->parsed()) {
      return cmd_eval_risk(opt);
    }
    if (synth->parsed()) {
      return cmd_synth(opt);
    }
  } catch (const IoError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
