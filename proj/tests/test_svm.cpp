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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "aidl/svm.hpp"

using namespace aidl;

namespace {

// y = 1 iff x1 > x2, with points closer than 0.05 to the diagonal dropped.
std::vector<FeatureVector> diagonal_set(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> out;
  while (out.size() < n) {
    Eigen::Vector2d x(rng.symmetric(1.0), rng.symmetric(1.0));
    if (std::abs(x(0) - x(1)) < 0.05) continue;
    FeatureVector fv;
    fv.x = x;
    fv.y = x(0) > x(1) ? 1 : 0;
    out.push_back(fv);
  }
  return out;
}

double accuracy(const SvmModel& m, const std::vector<FeatureVector>& data) {
  std::size_t ok = 0;
  for (const auto& d : data) ok += static_cast<std::size_t>(svm_predict(m, d.x).label == d.y);
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("separable toy set is fitted perfectly") {
  auto data = diagonal_set(200, 1);
  std::vector<double> objectives;
  auto model = svm_fit(data, SvmConfig{}, &objectives);
  CHECK(accuracy(model, data) == 1.0);
  REQUIRE(objectives.size() == 10);
  for (std::size_t i = 1; i < objectives.size(); ++i)
    CHECK(objectives[i] <= objectives[i - 1]);
}

TEST_CASE("hinge loss at the zero model") {
  SvmModel zero{VectorXd::Zero(3), 0.0, 1e-4};
  CHECK(hinge_loss(1.0, svm_predict(zero, Eigen::Vector3d(1, 2, 3)).margin) == 1.0);
  CHECK(hinge_loss(-1.0, svm_predict(zero, Eigen::Vector3d(-4, 0, 9)).margin) == 1.0);
  auto data = diagonal_set(20, 2);
  SvmModel zero2{VectorXd::Zero(2), 0.0, 1e-4};
  CHECK(svm_objective(zero2, data) == 1.0);
}

TEST_CASE("svm_fit is deterministic") {
  auto data = diagonal_set(100, 3);
  SvmConfig cfg;
  CHECK(svm_fit(data, cfg) == svm_fit(data, cfg));
  cfg.seed = 2;
  CHECK_FALSE(svm_fit(data, cfg) == svm_fit(data, SvmConfig{}));
}

TEST_CASE("svm_predict") {
  SvmModel m{Eigen::Vector2d(1, 0), 0.0, 1e-4};
  auto p = svm_predict(m, Eigen::Vector2d(1, 0));
  CHECK(p.margin == 1.0);
  CHECK(p.label == 1);
  auto tie = svm_predict(m, Eigen::Vector2d(0, 5));
  CHECK(tie.margin == 0.0);
  CHECK(tie.label == 0);
  CHECK_THROWS_AS(svm_predict(m, Eigen::Vector3d(1, 0, 0)), DimensionMismatch);
}

TEST_CASE("predictions match a brute-force sign on 100 points") {
  Rng rng(31);
  SvmModel m{rand_matrix(rng, 6, 1, 2.0), rng.symmetric(1.0), 1e-4};
  for (int i = 0; i < 100; ++i) {
    VectorXd x = rand_matrix(rng, 6, 1, 3.0);
    double margin = m.b;
    for (Eigen::Index j = 0; j < 6; ++j) margin += m.w(j) * x(j);
    auto p = svm_predict(m, x);
    CHECK(std::abs(p.margin - margin) <= 1e-12);
    CHECK(p.label == (margin > 0.0 ? 1 : 0));
  }
}

TEST_CASE("predicted classes are invariant to positive rescaling") {
  auto data = diagonal_set(100, 4);
  auto model = svm_fit(data, SvmConfig{});
  Rng rng(5);
  for (double alpha : {1e-3, 0.5, 7.0, 1e4}) {
    SvmModel scaled{model.w * alpha, model.b * alpha, model.lambda};
    for (int i = 0; i < 50; ++i) {
      VectorXd x = rand_matrix(rng, 2, 1, 1.0);
      CHECK(svm_predict(scaled, x).label == svm_predict(model, x).label);
    }
  }
}

TEST_CASE("svm errors") {
  CHECK_THROWS_AS(svm_fit(std::span<const FeatureVector>{}, SvmConfig{}), EmptyDatasetError);
  SvmConfig bad;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = SvmConfig{};
  bad.epochs = 0;
  CHECK_THROWS_AS(svm_fit(diagonal_set(10, 1), bad), ConfigError);
}
