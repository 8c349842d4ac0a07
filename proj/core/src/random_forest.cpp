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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "gnssio/error.hpp"
#include "gnssio/ml.hpp"

namespace gnssio {

RandomForestModel::RandomForestModel(std::vector<DecisionTreeModel> trees, ForestParams params,
                                     std::optional<double> oob_accuracy)
    : trees_(std::move(trees)), params_(params), oob_accuracy_(oob_accuracy) {
  if (trees_.empty()) throw Error(ErrorCode::kInvalidArgument, "random forest without trees");
}

Label RandomForestModel::Predict(std::span<const double> x) const {
  int indoor = 0;
  for (const auto& tree : trees_) indoor += tree.Predict(x) == Label::kIndoor ? 1 : 0;
  return MajorityLabel(indoor, static_cast<int>(trees_.size()) - indoor);
}

RandomForestModel TrainForest(const FeatureMatrix& x, std::span<const Label> y,
                              const ForestParams& params) {
  const std::size_t n = x.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyTrainingSet, "forest training set is empty");
  if (y.size() != n) throw Error(ErrorCode::kInvalidArgument, "label count != row count");
  if (params.n_trees == 0) throw Error(ErrorCode::kInvalidConfig, "n_trees must be positive");

  ForestParams resolved = params;
  if (resolved.features_per_split == 0) {
    resolved.features_per_split =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
  }

  std::vector<DecisionTreeModel> trees(resolved.n_trees);
  std::vector<std::vector<std::uint8_t>> in_bag(resolved.bootstrap ? resolved.n_trees : 0);

  // Each tree's randomness comes only from its own derived seed, so the
  // thread count never changes the result.
  auto train_one = [&](std::size_t t) {
    const std::uint64_t tree_seed = SplitMix64(resolved.seed + 0x1000193ull * (t + 1));
    std::vector<std::uint32_t> rows(n);
    if (resolved.bootstrap) {
      std::mt19937_64 rng(tree_seed);
      std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
      auto& bag = in_bag[t];
      bag.assign(n, 0);
      for (auto& r : rows) {
        r = pick(rng);
        bag[r] = 1;
      }
    } else {
      std::iota(rows.begin(), rows.end(), 0u);
    }
    TreeParams tp;
    tp.max_depth = resolved.max_depth;
    tp.min_leaf_size = resolved.min_leaf_size;
    tp.features_per_split = resolved.features_per_split;
    tp.seed = SplitMix64(tree_seed);
    trees[t] = TrainTreeOnRows(x, y, rows, tp);
  };

  std::size_t workers = resolved.threads != 0 ? resolved.threads
                                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, resolved.n_trees);
  if (workers <= 1) {
    for (std::size_t t = 0; t < resolved.n_trees; ++t) train_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < resolved.n_trees; t = next++) train_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::optional<double> oob;
  if (resolved.bootstrap) {
    std::size_t scored = 0, correct = 0;
    for (std::size_t r = 0; r < n; ++r) {
      int indoor = 0, outdoor = 0;
      for (std::size_t t = 0; t < trees.size(); ++t) {
        if (in_bag[t][r]) continue;
        (trees[t].Predict(x.row(r)) == Label::kIndoor ? indoor : outdoor) += 1;
      }
      if (indoor + outdoor == 0) continue;
      ++scored;
      correct += MajorityLabel(indoor, outdoor) == y[r] ? 1 : 0;
    }
    if (scored > 0) oob = static_cast<double>(correct) / static_cast<double>(scored);
  }
  return {std::move(trees), resolved, oob};
}

}  // namespace gnssio
