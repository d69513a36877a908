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

#include "uavrisk/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "uavrisk/errors.hpp"
#include "uavrisk/rng.hpp"

namespace uavrisk
{

const std::vector<std::string> & feature_names()
{
  static const std::vector<std::string> names = [] {
    const char * slots[kFeaturesPerStep] = {
      "own_speed",     "own_x",      "own_y",      "own_critical", "neighbor_speed",
      "neighbor_x",    "neighbor_y", "neighbor_critical", "pair_ttc", "pair_distance"};
    std::vector<std::string> out;
    out.reserve(kFeatureCount);
    for (int step = 0; step < kHistorySteps; ++step) {
      const int offset = kHistorySteps - step;  // oldest step first
      for (const char * slot : slots) {
        out.push_back(std::string(slot) + "[t-" + std::to_string(offset) + "]");
      }
    }
    return out;
  }();
  return names;
}

SafetyLabel DecisionTree::predict(std::span<const double> features) const
{
  int node = 0;
  while (nodes[node].feature >= 0) {
    const auto & n = nodes[node];
    node = features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  const auto & counts = nodes[node].counts;
  // Leaf ties resolve to risky, matching forest-level tie handling.
  return counts[1] >= counts[0] ? SafetyLabel::risky : SafetyLabel::safe;
}

namespace
{

double gini(std::int64_t safe, std::int64_t risky)
{
  const double n = static_cast<double>(safe + risky);
  if (n == 0.0) {
    return 0.0;
  }
  const double ps = static_cast<double>(safe) / n;
  const double pr = static_cast<double>(risky) / n;
  return 1.0 - ps * ps - pr * pr;
}

struct TreeBuilder
{
  const std::vector<FeatureSample> & data;  // canonical order
  const ForestParams & params;
  int n_features;
  std::mt19937_64 & rng;
  std::vector<double> & importance;  // accumulated for this tree
  double n_total;                    // bootstrap size
  DecisionTree tree;

  int build(std::vector<std::size_t> & indices, int depth)
  {
    std::int64_t safe = 0;
    std::int64_t risky = 0;
    for (const std::size_t idx : indices) {
      (data[idx].label == SafetyLabel::safe ? safe : risky) += 1;
    }

    const double node_gini = gini(safe, risky);
    const auto n = static_cast<std::int64_t>(indices.size());

    const auto make_leaf = [&] {
      TreeNode leaf;
      leaf.counts = {safe, risky};
      tree.nodes.push_back(leaf);
      return static_cast<int>(tree.nodes.size() - 1);
    };

    if (depth >= params.max_depth || node_gini == 0.0 ||
        n < 2 * static_cast<std::int64_t>(params.min_leaf)) {
      return make_leaf();
    }

    // Random feature subset for this node, evaluated in sorted order so the
    // best-split tie break (first strictly better wins) is canonical.
    std::vector<int> candidates(static_cast<std::size_t>(n_features));
    std::iota(candidates.begin(), candidates.end(), 0);
    const int m = std::min(params.features_per_split, n_features);
    for (int k = 0; k < m; ++k) {
      const auto j = static_cast<std::size_t>(
        k + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n_features - k))));
      std::swap(candidates[static_cast<std::size_t>(k)], candidates[j]);
    }
    candidates.resize(static_cast<std::size_t>(m));
    std::sort(candidates.begin(), candidates.end());

    struct Split
    {
      int feature{-1};
      double threshold{0.0};
      double decrease{0.0};
    };
    Split best;

    std::vector<std::pair<double, SafetyLabel>> column(indices.size());
    for (const int f : candidates) {
      for (std::size_t i = 0; i < indices.size(); ++i) {
        column[i] = {data[indices[i]].features[static_cast<std::size_t>(f)],
                     data[indices[i]].label};
      }
      std::sort(column.begin(), column.end(),
                [](const auto & a, const auto & b) { return a.first < b.first; });

      std::int64_t left_safe = 0;
      std::int64_t left_risky = 0;
      for (std::size_t k = 1; k < column.size(); ++k) {
        (column[k - 1].second == SafetyLabel::safe ? left_safe : left_risky) += 1;
        if (column[k - 1].first == column[k].first) {
          continue;  // can only split between distinct values
        }
        const auto left_n = static_cast<std::int64_t>(k);
        const auto right_n = n - left_n;
        if (left_n < params.min_leaf || right_n < params.min_leaf) {
          continue;
        }
        const double g_left = gini(left_safe, left_risky);
        const double g_right = gini(safe - left_safe, risky - left_risky);
        const double decrease =
          node_gini - (static_cast<double>(left_n) / static_cast<double>(n)) * g_left -
          (static_cast<double>(right_n) / static_cast<double>(n)) * g_right;
        if (decrease > best.decrease) {
          // Threshold is the largest left-hand value, so `x <= threshold`
          // reproduces this partition exactly.
          best = {f, column[k - 1].first, decrease};
        }
      }
    }

    if (best.feature < 0 || best.decrease <= 0.0) {
      return make_leaf();
    }

    importance[static_cast<std::size_t>(best.feature)] +=
      (static_cast<double>(n) / n_total) * best.decrease;

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    left_idx.reserve(indices.size());
    for (const std::size_t idx : indices) {
      if (data[idx].features[static_cast<std::size_t>(best.feature)] <= best.threshold) {
        left_idx.push_back(idx);
      } else {
        right_idx.push_back(idx);
      }
    }
    indices.clear();
    indices.shrink_to_fit();

    TreeNode node;
    node.feature = best.feature;
    node.threshold = best.threshold;
    tree.nodes.push_back(node);
    const auto self = static_cast<int>(tree.nodes.size() - 1);
    const int left = build(left_idx, depth + 1);
    const int right = build(right_idx, depth + 1);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
  }
};

bool sample_less(const FeatureSample & a, const FeatureSample & b)
{
  if (a.features.values != b.features.values) {
    return a.features.values < b.features.values;
  }
  return static_cast<int>(a.label) < static_cast<int>(b.label);
}

}  // namespace

ForestModel train_forest(
  const std::vector<FeatureSample> & samples, const ForestParams & params, std::uint64_t seed)
{
  if (params.tree_count < 1 || params.max_depth < 1 || params.min_leaf < 1 ||
      params.features_per_split < 1) {
    throw std::invalid_argument("forest hyperparameters must be positive");
  }

  std::int64_t safe = 0;
  std::int64_t risky = 0;
  for (const auto & s : samples) {
    (s.label == SafetyLabel::safe ? safe : risky) += 1;
  }
  if (safe == 0 || risky == 0) {
    throw ValidationError("training requires at least one sample of each class");
  }

  // Canonical order makes bootstrap draws independent of input permutation.
  std::vector<FeatureSample> data = samples;
  std::sort(data.begin(), data.end(), sample_less);

  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.n_features = kFeatureCount;
  model.trees.reserve(static_cast<std::size_t>(params.tree_count));

  const std::size_t n = data.size();
  std::vector<double> importance_sum(kFeatureCount, 0.0);

  for (int t = 0; t < params.tree_count; ++t) {
    auto rng = seeded_rng(seed, static_cast<std::uint64_t>(t));

    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) {
      bootstrap[i] = static_cast<std::size_t>(bounded(rng, n));
    }

    std::vector<double> tree_importance(kFeatureCount, 0.0);
    TreeBuilder builder{data, params, kFeatureCount, rng, tree_importance,
                        static_cast<double>(n), {}};
    builder.build(bootstrap, 0);
    model.trees.push_back(std::move(builder.tree));

    for (int f = 0; f < kFeatureCount; ++f) {
      importance_sum[static_cast<std::size_t>(f)] += tree_importance[static_cast<std::size_t>(f)];
    }
  }

  model.importances.assign(kFeatureCount, 0.0);
  double total = 0.0;
  for (int f = 0; f < kFeatureCount; ++f) {
    model.importances[static_cast<std::size_t>(f)] =
      importance_sum[static_cast<std::size_t>(f)] / static_cast<double>(params.tree_count);
    total += model.importances[static_cast<std::size_t>(f)];
  }
  if (total > 0.0) {
    for (auto & v : model.importances) {
      v /= total;
    }
  }
  return model;
}

SafetyLabel predict(const ForestModel & model, std::span<const double> features)
{
  if (static_cast<int>(features.size()) != model.n_features) {
    throw std::invalid_argument(
      "feature vector has length " + std::to_string(features.size()) + ", model expects " +
      std::to_string(model.n_features));
  }
  std::int64_t risky_votes = 0;
  for (const auto & tree : model.trees) {
    if (tree.predict(features) == SafetyLabel::risky) {
      ++risky_votes;
    }
  }
  // Ties go to risky.
  return 2 * risky_votes >= static_cast<std::int64_t>(model.trees.size())
           ? SafetyLabel::risky
           : SafetyLabel::safe;
}

std::vector<ImportanceEntry> ranked_importances(const ForestModel & model)
{
  const auto & names = feature_names();
  std::vector<ImportanceEntry> out;
  out.reserve(model.importances.size());
  for (std::size_t f = 0; f < model.importances.size(); ++f) {
    out.push_back({static_cast<int>(f), names[f], model.importances[f]});
  }
  std::sort(out.begin(), out.end(), [](const ImportanceEntry & a, const ImportanceEntry & b) {
    if (a.importance != b.importance) {
      return a.importance > b.importance;
    }
    return a.feature < b.feature;
  });
  return out;
}

namespace
{

using json = nlohmann::ordered_json;

json node_to_json(const DecisionTree & tree, int index)
{
  const auto & n = tree.nodes[static_cast<std::size_t>(index)];
  if (n.feature < 0) {
    return json{{"counts", {n.counts[0], n.counts[1]}}};
  }
  json j;
  j["feature"] = n.feature;
  j["threshold"] = n.threshold;
  j["left"] = node_to_json(tree, n.left);
  j["right"] = node_to_json(tree, n.right);
  return j;
}

int node_from_json(const json & j, DecisionTree & tree)
{
  TreeNode node;
  if (j.contains("counts")) {
    node.counts = {j["counts"][0].get<std::int64_t>(), j["counts"][1].get<std::int64_t>()};
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  }
  node.feature = j["feature"].get<int>();
  node.threshold = j["threshold"].get<double>();
  tree.nodes.push_back(node);
  const auto self = static_cast<int>(tree.nodes.size() - 1);
  const int left = node_from_json(j["left"], tree);
  const int right = node_from_json(j["right"], tree);
  tree.nodes[static_cast<std::size_t>(self)].left = left;
  tree.nodes[static_cast<std::size_t>(self)].right = right;
  return self;
}

}  // namespace

std::string serialize_model(const ForestModel & model)
{
  json j;
  j["schema_version"] = 1;
  j["seed"] = model.seed;
  j["hyperparameters"] = {
    {"tree_count", model.params.tree_count},
    {"max_depth", model.params.max_depth},
    {"min_leaf", model.params.min_leaf},
    {"features_per_split", model.params.features_per_split}};
  j["n_features"] = model.n_features;
  j["importances"] = model.importances;
  json trees = json::array();
  for (const auto & tree : model.trees) {
    trees.push_back(node_to_json(tree, 0));
  }
  j["trees"] = std::move(trees);
  return j.dump(2) + "\n";
}

ForestModel parse_model(const std::string & json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }

  ForestModel model;
  try {
    const auto & hyper = j.at("hyperparameters");
    model.params.tree_count = hyper.at("tree_count").get<int>();
    model.params.max_depth = hyper.at("max_depth").get<int>();
    model.params.min_leaf = hyper.at("min_leaf").get<int>();
    model.params.features_per_split = hyper.at("features_per_split").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.n_features = j.at("n_features").get<int>();
    model.importances = j.at("importances").get<std::vector<double>>();
    for (const auto & tj : j.at("trees")) {
      DecisionTree tree;
      node_from_json(tj, tree);
      model.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  return model;
}

}  // namespace uavrisk
