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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aidl/numerics.hpp"

using namespace aidl;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("matvec examples") {
  CHECK(matvec<double>(MatrixXd::Identity(3, 3), vec({1, 2, 3})) == vec({1, 2, 3}));
  CHECK(matvec<double>(MatrixXd::Zero(2, 4), vec({1, -2, 3, 9})) == VectorXd::Zero(2));

  MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(matvec<double>(m, vec({1, 1})) == vec({3, 7}));
}

TEST_CASE("matvec rejects mismatched shapes") {
  CHECK_THROWS_AS(matvec<double>(MatrixXd::Zero(2, 3), vec({1, 2})), DimensionMismatch);
}

TEST_CASE("matvec is linear on random instances") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto cols = static_cast<Eigen::Index>(1 + rng.below(6));
    MatrixXd a = rand_matrix(rng, rows, cols, 3.0);
    VectorXd v = rand_matrix(rng, cols, 1, 3.0);
    VectorXd w = rand_matrix(rng, cols, 1, 3.0);
    VectorXd lhs = matvec<double>(a, add<double>(v, w));
    VectorXd rhs = add<double>(matvec<double>(a, v), matvec<double>(a, w));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("activations") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(tanh_(0.0) == 0.0);
  CHECK(relu(-1.0) == 0.0);
  CHECK(relu(2.5) == 2.5);

  const double tiny = sigmoid(-709.0);
  CHECK(tiny > 0.0);
  CHECK(std::isfinite(tiny));
  CHECK(sigmoid(-1000.0) >= 0.0);
  CHECK(sigmoid(1000.0) == 1.0);

  for (double x = -30.0; x <= 30.0; x += 0.125)
    CHECK(std::abs(sigmoid(x) + sigmoid(-x) - 1.0) <= 1e-15);
}

TEST_CASE("elementwise activations agree with the scalar forms") {
  VectorXd v = vec({-3.5, -0.25, 0.0, 0.5, 40.0});
  VectorXd s = sigmoid(v);
  VectorXd t = tanh_(v);
  VectorXd r = relu(v);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    CHECK(s(i) == sigmoid(v(i)));
    CHECK(t(i) == tanh_(v(i)));
    CHECK(r(i) == relu(v(i)));
  }
}

TEST_CASE("elementwise operations") {
  CHECK(hadamard<double>(vec({1, 2}), vec({3, 4})) == vec({3, 8}));
  VectorXd v = vec({1.5, -2, 7});
  CHECK(add<double>(v, VectorXd::Zero(3)) == v);
  CHECK(sub<double>(v, v) == VectorXd::Zero(3));
  CHECK(scale<double>(v, 2.0) == vec({3, -4, 14}));

  MatrixXd e = outer<double>(vec({1, 0}), vec({1, 0}));
  MatrixXd expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK(e == expected);

  MatrixXd o = outer<double>(vec({1, 2}), vec({3, 4, 5}));
  CHECK(o.rows() == 2);
  CHECK(o.cols() == 3);
  CHECK(o(1, 2) == 10.0);

  CHECK_THROWS_AS(hadamard<double>(vec({1, 2}), vec({1})), DimensionMismatch);
  CHECK_THROWS_AS(add<double>(vec({1, 2}), vec({1})), DimensionMismatch);
  CHECK_THROWS_AS(sub<double>(vec({1}), vec({1, 2})), DimensionMismatch);
}

TEST_CASE("rand_matrix") {
  Rng a(3), b(3);
  CHECK(rand_matrix(a, 4, 5, 1.0) == rand_matrix(b, 4, 5, 1.0));

  Rng rng(5);
  MatrixXd small = rand_matrix(rng, 20, 20, 0.05);
  CHECK(small.cwiseAbs().maxCoeff() < 0.05);

  // Row-major draw order: element (0, 1) is the second draw.
  Rng order(9), replay(9);
  MatrixXd m = rand_matrix(order, 2, 3, 1.0);
  const double first = replay.symmetric(1.0);
  const double second = replay.symmetric(1.0);
  CHECK(m(0, 0) == first);
  CHECK(m(0, 1) == second);

  // Mean of 1000 uniform(-1, 1) draws is within 3 sigma / sqrt(1000) of 0.
  Rng stat(2024);
  MatrixXd draws = rand_matrix(stat, 1000, 1, 1.0);
  const double sigma = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(draws.mean()) < 3.0 * sigma / std::sqrt(1000.0));

  Rng bad(1);
  CHECK_THROWS_AS(rand_matrix(bad, 2, 2, 0.0), ConfigError);
}

TEST_CASE("Rng stream is the standard 64-bit Mersenne Twister") {
  // The C++ standard pins the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  CHECK(x == 9981545732273789042ULL);

  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("Rng ranges") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double s = rng.symmetric(2.0);
    CHECK(s > -2.0);
    CHECK(s < 2.0);
    CHECK(rng.below(7) < 7);
  }
}

TEST_CASE("shuffle yields a permutation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto shuffled = v;
    shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(shuffled != v);
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == v);
  }
}

TEST_CASE("all_finite") {
  VectorXd v = vec({1, 2});
  CHECK(all_finite(v));
  v(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(v));
}
