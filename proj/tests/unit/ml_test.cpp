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

#include <cmath>

#include <gtest/gtest.h>

#include "gnssio/ml.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace gnssio {
namespace {

using testing::CodeOf;
using testing::Gen;

struct Data {
  FeatureMatrix x;
  std::vector<Label> y;
};

// Two noisy Gaussian-ish blobs in `d` dimensions.
Data Blobs(Gen& g, int n, std::size_t d, double gap, double noise) {
  Data out{FeatureMatrix(d), {}};
  for (int i = 0; i < n; ++i) {
    const Label l = g.AnyLabel();
    std::vector<double> row(d);
    for (auto& v : row) v = (l == Label::kOutdoor ? gap : 0.0) + g.Real(-noise, noise);
    out.x.AppendRow(row);
    out.y.push_back(l);
  }
  return out;
}

double TrainAccuracy(const auto& model, const Data& d) {
  std::size_t ok = 0;
  for (std::size_t r = 0; r < d.x.rows(); ++r) ok += model.Predict(d.x.row(r)) == d.y[r] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(d.x.rows());
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(GiniImpurity(2, 2), 0.5);
  EXPECT_EQ(GiniImpurity(5, 0), 0.0);
  EXPECT_EQ(GiniImpurity(0, 3), 0.0);
  for (std::size_t a = 0; a <= 30; ++a) {
    for (std::size_t b = 0; b <= 30; ++b) {
      if (a + b == 0) continue;
      const double gi = GiniImpurity(a, b);
      EXPECT_GE(gi, 0.0);
      EXPECT_LE(gi, 0.5);
      EXPECT_EQ(gi == 0.0, a == 0 || b == 0);
    }
  }
}

TEST(DecisionTree, PureRootIsSingleLeaf) {
  Gen g(1);
  auto d = Blobs(g, 30, 3, 1.0, 1.0);
  std::fill(d.y.begin(), d.y.end(), Label::kIndoor);
  const auto tree = TrainTree(d.x, d.y);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_TRUE(tree.nodes()[0].is_leaf());
  EXPECT_EQ(tree.nodes()[0].label, Label::kIndoor);
}

TEST(DecisionTree, OneDimensionalSeparable) {
  Data d{FeatureMatrix(1), {}};
  for (double v : {12.0, 15.0, 18.0, 19.0, 11.0, 16.0}) {
    d.x.AppendRow(std::vector<double>{v});
    d.y.push_back(Label::kIndoor);
  }
  for (double v : {22.0, 25.0, 31.0, 28.0, 21.0, 40.0}) {
    d.x.AppendRow(std::vector<double>{v});
    d.y.push_back(Label::kOutdoor);
  }
  TreeParams p;
  p.min_leaf_size = 1;
  const auto tree = TrainTree(d.x, d.y, p);
  EXPECT_EQ(tree.depth(), 1);
  EXPECT_EQ(tree.leaf_count(), 2u);
  EXPECT_EQ(TrainAccuracy(tree, d), 1.0);
  const auto oracle = testing::OracleRootSplit(d.x, d.y);
  EXPECT_EQ(tree.nodes()[0].feature, oracle.feature);
  EXPECT_EQ(tree.nodes()[0].split_value, oracle.value);
  EXPECT_EQ(oracle.value, 20.0);
}

TEST(DecisionTree, EmptyTrainingSet) {
  FeatureMatrix x(2);
  std::vector<Label> y;
  EXPECT_EQ(CodeOf([&] { TrainTree(x, y); }), ErrorCode::kEmptyTrainingSet);
  EXPECT_EQ(CodeOf([&] { TrainForest(x, y); }), ErrorCode::kEmptyTrainingSet);
  EXPECT_EQ(CodeOf([&] { TrainSvm(x, y); }), ErrorCode::kEmptyTrainingSet);
}

TEST(DecisionTreeProperty, RootSplitMatchesExhaustiveGini) {
  Gen g(2);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = static_cast<std::size_t>(g.Int(1, 2));
    const int n = g.Int(2, 12);
    Data data{FeatureMatrix(d), {}};
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = g.Quantized(0.0, 1.0, 0.125);
      data.x.AppendRow(row);
      data.y.push_back(g.AnyLabel());
    }
    TreeParams p;
    p.min_leaf_size = 1;
    p.max_depth = 1;
    const auto tree = TrainTree(data.x, data.y, p);
    const auto oracle = testing::OracleRootSplit(data.x, data.y);
    const auto& root = tree.nodes()[0];
    ASSERT_EQ(root.feature, oracle.feature) << "trial " << trial;
    if (oracle.feature >= 0) {
      ASSERT_EQ(root.split_value, oracle.value) << "trial " << trial;
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(DecisionTreeProperty, DepthAndLeafSizeLimits) {
  Gen g(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = Blobs(g, g.Int(20, 400), 4, 0.5, 1.0);
    TreeParams p;
    p.max_depth = g.Int(1, 8);
    p.min_leaf_size = static_cast<std::size_t>(g.Int(1, 10));
    const auto tree = TrainTree(d.x, d.y, p);
    EXPECT_LE(tree.depth(), p.max_depth);
    for (const auto& node : tree.nodes()) {
      if (!node.is_leaf()) continue;
      const auto size = node.n_indoor + node.n_outdoor;
      EXPECT_GE(size, p.min_leaf_size);
      EXPECT_EQ(node.label, MajorityLabel(static_cast<int>(node.n_indoor),
                                          static_cast<int>(node.n_outdoor)));
    }
  }
}

TEST(DecisionTree, RejectsMalformedNodes) {
  std::vector<TreeNode> nodes(1);
  nodes[0].feature = 0;
  nodes[0].left = 3;
  nodes[0].right = 4;
  EXPECT_EQ(CodeOf([&] { DecisionTreeModel(nodes, 3, 1); }), ErrorCode::kInvalidArgument);
}

TEST(RandomForest, SingleTreeEqualsDecisionTree) {
  Gen g(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = Blobs(g, 300, 5, 0.4, 1.0);
    TreeParams tp;
    tp.max_depth = 6;
    tp.min_leaf_size = 3;
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    fp.features_per_split = 5;
    fp.max_depth = 6;
    fp.min_leaf_size = 3;
    const auto tree = TrainTree(d.x, d.y, tp);
    const auto forest = TrainForest(d.x, d.y, fp);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> x(5);
      for (auto& v : x) v = g.Real(-1.5, 2.0);
      ASSERT_EQ(forest.Predict(x), tree.Predict(x));
    }
  }
}

TEST(RandomForest, DeterministicAcrossRunsAndThreadCounts) {
  Gen g(5);
  auto d = Blobs(g, 500, 6, 0.3, 1.0);
  ForestParams p;
  p.n_trees = 20;
  p.seed = 99;
  p.threads = 1;
  const auto a = TrainForest(d.x, d.y, p);
  const auto b = TrainForest(d.x, d.y, p);
  p.threads = 4;
  const auto c = TrainForest(d.x, d.y, p);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  p.seed = 100;
  EXPECT_FALSE(a == TrainForest(d.x, d.y, p));
}

TEST(RandomForest, OutOfBagAccuracy) {
  Gen g(6);
  auto d = Blobs(g, 600, 4, 0.6, 1.0);
  ForestParams p;
  p.n_trees = 50;
  const auto forest = TrainForest(d.x, d.y, p);
  ASSERT_TRUE(forest.oob_accuracy().has_value());
  EXPECT_GE(*forest.oob_accuracy(), 0.0);
  EXPECT_LE(*forest.oob_accuracy(), 1.0);
  // Out-of-bag accuracy estimates held-out accuracy, so it cannot beat the
  // forest's own fit on its training rows by much.
  EXPECT_LE(*forest.oob_accuracy(), TrainAccuracy(forest, d) + 0.02);
  EXPECT_GT(*forest.oob_accuracy(), 0.6);

  p.bootstrap = false;
  EXPECT_FALSE(TrainForest(d.x, d.y, p).oob_accuracy().has_value());
}

TEST(RandomForest, MajorityOverTrees) {
  auto leaf = [](Label l) {
    TreeNode n;
    n.label = l;
    return DecisionTreeModel({n}, 0, 1);
  };
  const RandomForestModel forest(
      {leaf(Label::kIndoor), leaf(Label::kOutdoor), leaf(Label::kOutdoor)}, ForestParams{});
  EXPECT_EQ(forest.Predict(std::vector<double>{0.0}), Label::kOutdoor);
  const RandomForestModel tied({leaf(Label::kIndoor), leaf(Label::kOutdoor)}, ForestParams{});
  EXPECT_EQ(tied.Predict(std::vector<double>{0.0}), Label::kIndoor);
}

TEST(LinearSvm, SeparableAtPlusMinusOne) {
  Data d{FeatureMatrix(1), {}};
  for (int i = 0; i < 20; ++i) {
    d.x.AppendRow(std::vector<double>{i % 2 ? 1.0 : -1.0});
    d.y.push_back(i % 2 ? Label::kOutdoor : Label::kIndoor);
  }
  const auto svm = TrainSvm(d.x, d.y);
  EXPECT_GT(svm.weights()[0], 0.0);
  EXPECT_EQ(TrainAccuracy(svm, d), 1.0);
  EXPECT_EQ(svm.epochs_trained(), 30);
  EXPECT_EQ(svm.loss_history().size(), 30u);
}

TEST(LinearSvm, IdenticalVectorsPredictMajority) {
  Data d{FeatureMatrix(3), {}};
  for (int i = 0; i < 10; ++i) {
    d.x.AppendRow(std::vector<double>{0.3, 0.7, 0.1});
    d.y.push_back(i < 7 ? Label::kOutdoor : Label::kIndoor);
  }
  EXPECT_EQ(TrainSvm(d.x, d.y).Predict(std::vector<double>{0.3, 0.7, 0.1}), Label::kOutdoor);
  for (auto& l : d.y) l = l == Label::kOutdoor ? Label::kIndoor : Label::kOutdoor;
  EXPECT_EQ(TrainSvm(d.x, d.y).Predict(std::vector<double>{0.3, 0.7, 0.1}), Label::kIndoor);
}

TEST(LinearSvm, HugeRegularizationShrinksWeights) {
  Gen g(7);
  auto d = Blobs(g, 400, 3, 1.0, 0.5);
  SvmParams p;
  p.lambda = 1e4;
  const auto svm = TrainSvm(d.x, d.y, p);
  for (double w : svm.weights()) EXPECT_LT(std::abs(w), 1e-3);
  // Never worse than the all-zero model, whose mean hinge loss is exactly 1.
  EXPECT_LE(SvmObjective(svm, d.x, d.y), 1.0 + 1e-9);
}

TEST(LinearSvm, Errors) {
  Data d{FeatureMatrix(1), {}};
  d.x.AppendRow(std::vector<double>{1.0});
  d.y.push_back(Label::kIndoor);
  EXPECT_EQ(CodeOf([&] { TrainSvm(d.x, d.y); }), ErrorCode::kOneClassOnly);
  d.x.AppendRow(std::vector<double>{2.0});
  d.y.push_back(Label::kOutdoor);
  SvmParams bad;
  bad.lambda = 0.0;
  EXPECT_EQ(CodeOf([&] { TrainSvm(d.x, d.y, bad); }), ErrorCode::kInvalidConfig);
}

TEST(LinearSvmProperty, LossNonincreasingWithSmallDecayingStep) {
  Gen g(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = Blobs(g, 300, 4, 0.5, 1.0);
    SvmParams p;
    p.eta0 = 1e-3;
    p.lambda = 1e-2;
    p.epochs = 25;
    p.seed = static_cast<std::uint64_t>(trial);
    const auto svm = TrainSvm(d.x, d.y, p);
    const auto& h = svm.loss_history();
    ASSERT_EQ(h.size(), 25u);
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] + 1e-12) << "epoch " << i;
    EXPECT_DOUBLE_EQ(h.back(), SvmObjective(svm, d.x, d.y));
  }
}

TEST(LinearSvm, Deterministic) {
  Gen g(9);
  auto d = Blobs(g, 200, 3, 0.5, 1.0);
  EXPECT_EQ(TrainSvm(d.x, d.y), TrainSvm(d.x, d.y));
}

}  // namespace
}  // namespace gnssio
