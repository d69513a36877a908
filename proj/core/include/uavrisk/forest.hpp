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

// From-scratch random forest classifier over fixed-length feature vectors.
// Bootstrap resampling, random feature subsets per split, Gini impurity
// splits, majority-vote prediction with ties resolved to risky, and
// Gini-based feature importances. Fully deterministic given the seed: each
// tree draws from its own (seed, tree index) stream and the training set is
// brought into a canonical order before any index-based draw.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace uavrisk
{

inline constexpr int kHistorySteps = 5;
inline constexpr int kFeaturesPerStep = 10;
inline constexpr int kFeatureCount = kHistorySteps * kFeaturesPerStep;

enum class SafetyLabel : int
{
  safe = 0,
  risky = 1,
};

struct FeatureVector
{
  std::array<double, kFeatureCount> values{};

  double & operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureVector &) const = default;
};

struct FeatureSample
{
  FeatureVector features;
  SafetyLabel label{SafetyLabel::safe};

  bool operator==(const FeatureSample &) const = default;
};

/// Names of the 50 features, index-aligned with FeatureVector. Steps run from
/// t-5 (oldest) to t-1 (most recent).
const std::vector<std::string> & feature_names();

struct ForestParams
{
  int tree_count{100};
  int max_depth{12};
  int min_leaf{5};
  int features_per_split{8};  // ceil(sqrt(50))
};

/// Binary tree in flat form; node 0 is the root. Internal nodes route
/// values[feature] <= threshold to `left`; leaves carry class counts.
struct TreeNode
{
  int feature{-1};  // -1 marks a leaf
  double threshold{0.0};
  int left{-1};
  int right{-1};
  std::array<std::int64_t, 2> counts{0, 0};  // [safe, risky], leaves only
};

struct DecisionTree
{
  std::vector<TreeNode> nodes;

  [[nodiscard]] SafetyLabel predict(std::span<const double> features) const;
};

struct ForestModel
{
  ForestParams params;
  std::uint64_t seed{0};
  int n_features{kFeatureCount};
  std::vector<DecisionTree> trees;
  std::vector<double> importances;  // non-negative, sums to 1 when any split exists
};

/// Trains a forest on the samples. Throws ValidationError unless both classes
/// are present. Identical (samples, params, seed) yield an identical model,
/// regardless of the samples' ordering.
ForestModel train_forest(
  const std::vector<FeatureSample> & samples, const ForestParams & params, std::uint64_t seed);

/// Majority vote over trees; a tie predicts risky. Throws std::invalid_argument
/// when the feature count does not match the model.
SafetyLabel predict(const ForestModel & model, std::span<const double> features);

struct ImportanceEntry
{
  int feature{0};
  std::string name;
  double importance{0.0};
};

/// Importances ranked descending (ties: smaller feature index first).
std::vector<ImportanceEntry> ranked_importances(const ForestModel & model);

/// JSON round trip for trained models.
std::string serialize_model(const ForestModel & model);
ForestModel parse_model(const std::string & json_text);

}  // namespace uavrisk
