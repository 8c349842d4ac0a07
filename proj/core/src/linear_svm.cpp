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

double Sign(Label l) { return l == Label::kOutdoor ? 1.0 : -1.0; }

}  // namespace

LinearSvmModel::LinearSvmModel(std::vector<double> weights, double bias, SvmParams params,
                               std::vector<double> loss_history)
    : weights_(std::move(weights)),
      bias_(bias),
      params_(params),
      loss_history_(std::move(loss_history)) {}

double LinearSvmModel::Decision(std::span<const double> x) const {
  double s = bias_;
  for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x[i];
  return s;
}

Label LinearSvmModel::Predict(std::span<const double> x) const {
  return Decision(x) > 0.0 ? Label::kOutdoor : Label::kIndoor;
}

double SvmObjective(const LinearSvmModel& model, const FeatureMatrix& x,
                    std::span<const Label> y) {
  double norm2 = 0.0;
  for (double w : model.weights()) norm2 += w * w;
  double hinge = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    hinge += std::max(0.0, 1.0 - Sign(y[r]) * model.Decision(x.row(r)));
  }
  const double n = static_cast<double>(std::max<std::size_t>(x.rows(), 1));
  return 0.5 * model.params().lambda * norm2 + hinge / n;
}

// Stochastic subgradient descent on the regularized hinge loss with a
// decaying step. The bias is not regularized.
LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const Label> y,
                        const SvmParams& params) {
  const std::size_t n = x.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyTrainingSet, "SVM training set is empty");
  if (y.size() != n) throw Error(ErrorCode::kInvalidArgument, "label count != row count");
  if (!(params.lambda > 0.0) || params.epochs <= 0 || !(params.eta0 > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "SVM needs lambda > 0, epochs > 0, eta0 > 0");
  }
  const auto indoor = std::count(y.begin(), y.end(), Label::kIndoor);
  if (indoor == 0 || static_cast<std::size_t>(indoor) == n) {
    throw Error(ErrorCode::kOneClassOnly, "SVM training needs both classes");
  }

  const std::size_t d = x.cols();
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(params.seed);
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(params.epochs));

  double t = 0.0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (const std::uint32_t r : order) {
      const double eta = params.eta0 / (1.0 + params.eta0 * params.lambda * t);
      t += 1.0;
      const auto row = x.row(r);
      const double label = Sign(y[r]);
      double score = b;
      for (std::size_t i = 0; i < d; ++i) score += w[i] * row[i];
      const double shrink = std::max(0.0, 1.0 - eta * params.lambda);
      for (auto& wi : w) wi *= shrink;
      if (label * score < 1.0) {
        for (std::size_t i = 0; i < d; ++i) w[i] += eta * label * row[i];
        b += eta * label;
      }
    }
    history.push_back(SvmObjective(LinearSvmModel(w, b, params), x, y));
  }
  return {std::move(w), b, params, std::move(history)};
}

}  // namespace gnssio
