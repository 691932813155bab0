// Copyright 2026 The aidl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aidl/svm.hpp"

#include <numeric>

namespace aidl {

namespace {
double signed_target(int y) { return y ? 1.0 : -1.0; }
}  // namespace

double svm_objective(const SvmModel& model, std::span<const FeatureVector> data) {
  if (data.empty()) throw EmptyDatasetError();
  double hinge = 0.0;
  for (const auto& fv : data)
    hinge += hinge_loss(signed_target(fv.y), svm_predict(model, fv.x).margin);
  return 0.5 * model.lambda * model.w.squaredNorm() +
         hinge / static_cast<double>(data.size());
}

SvmModel svm_fit(std::span<const FeatureVector> data, const SvmConfig& cfg,
                 std::vector<double>* epoch_objectives) {
  cfg.validate();
  if (data.empty()) throw EmptyDatasetError();
  const auto dim = data.front().x.size();
  for (const auto& fv : data) detail::require_same(dim, fv.x.size(), "svm_fit: input width");

  SvmModel model{VectorXd::Zero(dim), 0.0, cfg.lambda};
  // running mean of the iterates; restarted after the first (burn-in) epoch
  SvmModel mean = model;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::uint64_t t = 0;
  std::uint64_t k = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), rng);
    if (epoch == 1) k = 0;
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const double y = signed_target(data[i].y);
      const double margin = y * (model.w.dot(data[i].x) + model.b);
      model.w *= 1.0 - eta * cfg.lambda;
      if (margin < 1.0) {
        model.w += (eta * y) * data[i].x;
        model.b += eta * y;
      }
      ++k;
      const double a = 1.0 / static_cast<double>(k);
      mean.w += a * (model.w - mean.w);
      mean.b += a * (model.b - mean.b);
    }
    if (epoch_objectives) epoch_objectives->push_back(svm_objective(mean, data));
  }
  return mean;
}

SvmPrediction svm_predict(const SvmModel& model, const VectorXd& x) {
  detail::require_same(model.w.size(), x.size(), "svm_predict");
  SvmPrediction p;
  p.margin = model.w.dot(x) + model.b;
  p.label = p.margin > 0.0 ? 1 : 0;
  return p;
}

}  // namespace aidl
