// Copyright 2026 The gnssio Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Decision tree (CART, Gini), random forest and linear SVM over dense
// feature rows. Labels are binary Indoor/Outdoor; every tie resolves to
// Indoor.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gnssio/features.hpp"
#include "gnssio/types.hpp"

namespace gnssio {

// Binary Gini impurity, in [0, 0.5]; 0 for an empty or pure node.
double GiniImpurity(std::size_t n_indoor, std::size_t n_outdoor);

// Deterministic 64-bit mixer used to derive per-tree and per-session seeds.
std::uint64_t SplitMix64(std::uint64_t x);

struct TreeParams {
  int max_depth = 12;
  std::size_t min_leaf_size = 5;
  // Candidate features drawn per split; 0 or >= column count means all.
  std::size_t features_per_split = 0;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double split_value = 0.0;  // x[feature] <= split_value goes left
  int left = -1;
  int right = -1;
  Label label = Label::kIndoor;
  std::uint32_t n_indoor = 0;
  std::uint32_t n_outdoor = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class DecisionTreeModel {
 public:
  DecisionTreeModel() = default;
  DecisionTreeModel(std::vector<TreeNode> nodes, int max_depth, std::size_t min_leaf_size);

  Label Predict(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int max_depth() const { return max_depth_; }
  std::size_t min_leaf_size() const { return min_leaf_size_; }
  // Longest root-to-leaf path, counted in edges.
  int depth() const;
  std::size_t leaf_count() const;

  bool operator==(const DecisionTreeModel&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  int max_depth_ = 0;
  std::size_t min_leaf_size_ = 0;
};

// Throws Error{kEmptyTrainingSet} for zero rows.
DecisionTreeModel TrainTree(const FeatureMatrix& x, std::span<const Label> y,
                            const TreeParams& params = {});

// Trains on the multiset of rows given by `sample_rows` (duplicates allowed).
DecisionTreeModel TrainTreeOnRows(const FeatureMatrix& x, std::span<const Label> y,
                                  std::span<const std::uint32_t> sample_rows,
                                  const TreeParams& params);

struct ForestParams {
  std::size_t n_trees = 100;
  // 0 means ceil(sqrt(d)).
  std::size_t features_per_split = 0;
  bool bootstrap = true;
  int max_depth = 12;
  std::size_t min_leaf_size = 5;
  std::uint64_t seed = 42;
  // Worker threads; 0 means hardware concurrency. Output does not depend on it.
  std::size_t threads = 0;
};

class RandomForestModel {
 public:
  RandomForestModel() = default;
  RandomForestModel(std::vector<DecisionTreeModel> trees, ForestParams params,
                    std::optional<double> oob_accuracy = std::nullopt);

  Label Predict(std::span<const double> x) const;

  const std::vector<DecisionTreeModel>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  std::optional<double> oob_accuracy() const { return oob_accuracy_; }

  bool operator==(const RandomForestModel& o) const {
    return trees_ == o.trees_ && oob_accuracy_ == o.oob_accuracy_ &&
           params_.n_trees == o.params_.n_trees &&
           params_.features_per_split == o.params_.features_per_split &&
           params_.bootstrap == o.params_.bootstrap && params_.max_depth == o.params_.max_depth &&
           params_.min_leaf_size == o.params_.min_leaf_size && params_.seed == o.params_.seed;
  }

 private:
  std::vector<DecisionTreeModel> trees_;
  ForestParams params_;
  std::optional<double> oob_accuracy_;
};

// Throws Error{kEmptyTrainingSet} for zero rows.
RandomForestModel TrainForest(const FeatureMatrix& x, std::span<const Label> y,
                              const ForestParams& params = {});

struct SvmParams {
  double lambda = 1e-4;  // L2 regularization strength
  int epochs = 30;
  double eta0 = 0.1;  // initial step; step_t = eta0 / (1 + eta0 * lambda * t)
  std::uint64_t seed = 7;
};

class LinearSvmModel {
 public:
  LinearSvmModel() = default;
  LinearSvmModel(std::vector<double> weights, double bias, SvmParams params,
                 std::vector<double> loss_history = {});

  // w.x + b; positive means Outdoor.
  double Decision(std::span<const double> x) const;
  Label Predict(std::span<const double> x) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const SvmParams& params() const { return params_; }
  int epochs_trained() const { return params_.epochs; }
  // Regularized hinge objective on the training set after each epoch.
  const std::vector<double>& loss_history() const { return loss_history_; }

  bool operator==(const LinearSvmModel& o) const {
    return weights_ == o.weights_ && bias_ == o.bias_ && params_.lambda == o.params_.lambda &&
           params_.epochs == o.params_.epochs && params_.eta0 == o.params_.eta0 &&
           params_.seed == o.params_.seed;
  }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  SvmParams params_;
  std::vector<double> loss_history_;
};

// Regularized hinge objective: lambda/2 |w|^2 + mean(max(0, 1 - y(w.x + b))).
double SvmObjective(const LinearSvmModel& model, const FeatureMatrix& x, std::span<const Label> y);

// Throws Error{kEmptyTrainingSet} for zero rows and Error{kOneClassOnly}
// when only one label is present.
LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const Label> y,
                        const SvmParams& params = {});

}  // namespace gnssio
