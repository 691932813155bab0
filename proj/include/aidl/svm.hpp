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

#ifndef AIDL_SVM_HPP
#define AIDL_SVM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aidl/dataset.hpp"
#include "aidl/numerics.hpp"

namespace aidl {

struct SvmConfig {
  double lambda = 1e-4;
  int epochs = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
  }
};

/// Linear soft-margin classifier f(x) = w.x + b.
struct SvmModel {
  VectorXd w;
  double b = 0.0;
  double lambda = 1e-4;

  bool operator==(const SvmModel& o) const {
    return w.size() == o.w.size() && w == o.w && b == o.b && lambda == o.lambda;
  }
};

struct SvmPrediction {
  int label = 0;
  double margin = 0.0;
};

/// Hinge loss max(0, 1 - y f) for y in {-1, +1}.
inline double hinge_loss(double signed_target, double margin) {
  const double v = 1.0 - signed_target * margin;
  return v > 0.0 ? v : 0.0;
}

/// lambda/2 |w|^2 + mean hinge loss over `data` (targets mapped 0 -> -1).
double svm_objective(const SvmModel& model, std::span<const FeatureVector> data);

/// Per-sample subgradient descent with step 1/(lambda t) on the primal
/// objective. The bias is not regularized. Samples are visited in a fresh
/// seeded permutation each epoch. The returned model is the mean of the
/// iterates from the second epoch on (the whole run when epochs == 1). When
/// `epoch_objectives` is given, the objective of that mean after each epoch
/// is appended to it.
SvmModel svm_fit(std::span<const FeatureVector> data, const SvmConfig& cfg,
                 std::vector<double>* epoch_objectives = nullptr);

/// Class 1 iff the margin is strictly positive.
SvmPrediction svm_predict(const SvmModel& model, const VectorXd& x);

}  // namespace aidl

#endif  // AIDL_SVM_HPP
