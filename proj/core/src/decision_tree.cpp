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
#include <numeric>
#include <random>

#include "gnssio/error.hpp"
#include "gnssio/ml.hpp"

namespace gnssio {
namespace {

constexpr double kMinGain = 1e-12;

// CART builder over presorted per-feature position lists. Every node owns
// the same [begin, end) range in each feature's ordering; splitting stably
// partitions all orderings so no node ever re-sorts.
class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const Label> y,
              std::span<const std::uint32_t> rows, const TreeParams& params)
      : params_(params), d_(x.cols()), m_(rows.size()), rng_(params.seed) {
    labels_.resize(m_);
    columns_.assign(d_, std::vector<double>(m_));
    for (std::size_t p = 0; p < m_; ++p) {
      labels_[p] = y[rows[p]];
      const auto row = x.row(rows[p]);
      for (std::size_t f = 0; f < d_; ++f) columns_[f][p] = row[f];
    }
    order_.assign(std::max<std::size_t>(d_, 1), std::vector<std::uint32_t>(m_));
    for (std::size_t f = 0; f < order_.size(); ++f) {
      auto& ord = order_[f];
      std::iota(ord.begin(), ord.end(), 0u);
      if (f < d_) {
        const auto& col = columns_[f];
        std::stable_sort(ord.begin(), ord.end(),
                         [&col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
      }
    }
    goes_left_.assign(m_, 0);
    scratch_.resize(m_);
    candidates_.resize(d_);
    std::iota(candidates_.begin(), candidates_.end(), 0u);
  }

  std::vector<TreeNode> Build() {
    Grow(0, m_, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double value = 0.0;
    std::size_t n_left = 0;
    double gain = 0.0;
  };

  int Grow(std::size_t begin, std::size_t end, int depth) {
    std::uint32_t n_in = 0, n_out = 0;
    for (std::size_t k = begin; k < end; ++k) {
      (labels_[order_[0][k]] == Label::kIndoor ? n_in : n_out) += 1;
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].n_indoor = n_in;
    nodes_[id].n_outdoor = n_out;
    nodes_[id].label = MajorityLabel(static_cast<int>(n_in), static_cast<int>(n_out));

    const std::size_t n = end - begin;
    const std::size_t min_leaf = std::max<std::size_t>(params_.min_leaf_size, 1);
    if (n_in == 0 || n_out == 0 || depth >= params_.max_depth || n < 2 * min_leaf || d_ == 0) {
      return id;
    }

    const Split split = FindSplit(begin, end, n_in, n_out, min_leaf);
    if (split.feature < 0) return id;

    Partition(begin, end, split);
    nodes_[id].feature = split.feature;
    nodes_[id].split_value = split.value;
    const int left = Grow(begin, begin + split.n_left, depth + 1);
    const int right = Grow(begin + split.n_left, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void DrawCandidates() {
    const std::size_t k = params_.features_per_split;
    if (k == 0 || k >= d_) {
      std::iota(candidates_.begin(), candidates_.end(), 0u);
      active_ = d_;
      return;
    }
    std::iota(candidates_.begin(), candidates_.end(), 0u);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, d_ - 1);
      std::swap(candidates_[i], candidates_[pick(rng_)]);
    }
    std::sort(candidates_.begin(), candidates_.begin() + static_cast<std::ptrdiff_t>(k));
    active_ = k;
  }

  Split FindSplit(std::size_t begin, std::size_t end, std::uint32_t n_in, std::uint32_t n_out,
                  std::size_t min_leaf) {
    const double n = static_cast<double>(end - begin);
    const double parent = GiniImpurity(n_in, n_out);
    DrawCandidates();

    Split best;
    for (std::size_t c = 0; c < active_; ++c) {
      const std::uint32_t f = candidates_[c];
      const auto& ord = order_[f];
      const auto& col = columns_[f];
      double left_in = 0, left_out = 0;
      for (std::size_t k = begin; k + 1 < end; ++k) {
        (labels_[ord[k]] == Label::kIndoor ? left_in : left_out) += 1;
        const double v = col[ord[k]];
        const double next = col[ord[k + 1]];
        if (!(v < next)) continue;
        const std::size_t n_left = k + 1 - begin;
        const std::size_t n_right = end - begin - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double nl = static_cast<double>(n_left);
        const double nr = static_cast<double>(n_right);
        const double right_in = n_in - left_in;
        const double right_out = n_out - left_out;
        const double weighted = (nl - (left_in * left_in + left_out * left_out) / nl + nr -
                                 (right_in * right_in + right_out * right_out) / nr) /
                                n;
        const double gain = parent - weighted;
        if (gain > kMinGain && (best.feature < 0 || gain > best.gain + kMinGain)) {
          double mid = v + (next - v) / 2.0;
          if (!(mid < next)) mid = v;
          best = {static_cast<int>(f), mid, n_left, gain};
        }
      }
    }
    return best;
  }

  void Partition(std::size_t begin, std::size_t end, const Split& split) {
    const auto& chosen = order_[split.feature];
    for (std::size_t k = begin; k < end; ++k) goes_left_[chosen[k]] = k < begin + split.n_left;
    for (auto& ord : order_) {
      std::size_t l = begin, r = 0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t p = ord[k];
        if (goes_left_[p]) {
          ord[l++] = p;
        } else {
          scratch_[r++] = p;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                ord.begin() + static_cast<std::ptrdiff_t>(l));
    }
  }

  TreeParams params_;
  std::size_t d_;
  std::size_t m_;
  std::mt19937_64 rng_;
  std::vector<Label> labels_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint32_t> candidates_;
  std::size_t active_ = 0;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double GiniImpurity(std::size_t n_indoor, std::size_t n_outdoor) {
  const double n = static_cast<double>(n_indoor + n_outdoor);
  if (n == 0) return 0.0;
  const double p = static_cast<double>(n_indoor) / n;
  const double q = static_cast<double>(n_outdoor) / n;
  return 1.0 - p * p - q * q;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

DecisionTreeModel::DecisionTreeModel(std::vector<TreeNode> nodes, int max_depth,
                                     std::size_t min_leaf_size)
    : nodes_(std::move(nodes)), max_depth_(max_depth), min_leaf_size_(min_leaf_size) {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "decision tree without nodes");
  for (int i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      throw Error(ErrorCode::kInvalidArgument, "decision tree child index out of range");
    }
  }
}

Label DecisionTreeModel::Predict(std::span<const double> x) const {
  int i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = x[static_cast<std::size_t>(node.feature)] <= node.split_value ? node.left : node.right;
  }
  return nodes_[i].label;
}

int DecisionTreeModel::depth() const {
  // Children always have larger indices than their parent.
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

DecisionTreeModel TrainTreeOnRows(const FeatureMatrix& x, std::span<const Label> y,
                                  std::span<const std::uint32_t> sample_rows,
                                  const TreeParams& params) {
  if (sample_rows.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "tree training set is empty");
  if (y.size() != x.rows()) throw Error(ErrorCode::kInvalidArgument, "label count != row count");
  TreeBuilder builder(x, y, sample_rows, params);
  return {builder.Build(), params.max_depth, params.min_leaf_size};
}

DecisionTreeModel TrainTree(const FeatureMatrix& x, std::span<const Label> y,
                            const TreeParams& params) {
  std::vector<std::uint32_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0u);
  return TrainTreeOnRows(x, y, rows, params);
}

}  // namespace gnssio
