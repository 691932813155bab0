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

#include "aidl/lstm.hpp"
#include "aidl/training.hpp"
#include "oracles.hpp"

using namespace aidl;

namespace {

VectorXd random_vector(Rng& rng, Eigen::Index n, double scale) {
  return rand_matrix(rng, n, 1, scale);
}

LstmParams<double> random_params(Rng& rng, Eigen::Index D, Eigen::Index H) {
  auto p = init_params(rng, D, H);
  for (auto& g : p.gates) g.b = random_vector(rng, H, 0.5);
  p.b_out = rng.symmetric(0.5);
  return p;
}

}  // namespace

TEST_CASE("zero parameters give half-open gates and a zero state") {
  auto p = LstmParams<double>::zeros(4, 3);
  VectorXd x = VectorXd::LinSpaced(4, -1.0, 2.0);
  for (auto act : {CellActivation::tanh, CellActivation::relu}) {
    auto out = cell_forward(p, act, x, LstmState<double>::zeros(3));
    CHECK(out.gates.input == VectorXd::Constant(3, 0.5));
    CHECK(out.gates.forget == VectorXd::Constant(3, 0.5));
    CHECK(out.gates.output == VectorXd::Constant(3, 0.5));
    CHECK(out.gates.candidate == VectorXd::Zero(3));
    CHECK(out.state.c == VectorXd::Zero(3));
    CHECK(out.state.h == VectorXd::Zero(3));
  }
}

TEST_CASE("saturated forget and input gates pass the cell state through") {
  auto p = LstmParams<double>::zeros(2, 3);
  p.gates[kForgetGate].b.setConstant(50.0);
  p.gates[kInputGate].b.setConstant(-50.0);
  p.gates[kCandidate].wx.setConstant(1.0);
  LstmState<double> prev{VectorXd::Zero(3), Eigen::Vector3d(0.3, -1.2, 2.0)};
  auto out = cell_forward(p, CellActivation::tanh, VectorXd(Eigen::Vector2d(1.0, 1.0)), prev);
  CHECK((out.state.c - prev.c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cell_forward matches the straight-line reference") {
  for (auto act : {CellActivation::tanh, CellActivation::relu}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng(seed);
      auto p = random_params(rng, 8, 5);
      VectorXd x = random_vector(rng, 8, 1.0);
      LstmState<double> prev{random_vector(rng, 5, 1.0), random_vector(rng, 5, 1.0)};

      auto out = cell_forward(p, act, x, prev);
      auto ref = testing::ref_cell(p, act == CellActivation::relu, testing::to_vec(x),
                                   testing::to_vec(prev.h), testing::to_vec(prev.c));
      for (Eigen::Index r = 0; r < 5; ++r) {
        CHECK(std::abs(out.gates.input(r) - ref.i[r]) <= 1e-12);
        CHECK(std::abs(out.gates.forget(r) - ref.f[r]) <= 1e-12);
        CHECK(std::abs(out.gates.output(r) - ref.o[r]) <= 1e-12);
        CHECK(std::abs(out.gates.candidate(r) - ref.cand[r]) <= 1e-12);
        CHECK(std::abs(out.state.c(r) - ref.c[r]) <= 1e-12);
        CHECK(std::abs(out.state.h(r) - ref.h[r]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("forward over a sequence matches the reference, with and without a mask") {
  for (auto act : {CellActivation::tanh, CellActivation::relu}) {
    Rng rng(21);
    auto p = random_params(rng, 8, 5);
    std::vector<VectorXd> seq;
    std::vector<testing::Vec> ref_seq;
    for (int t = 0; t < 3; ++t) {
      seq.push_back(random_vector(rng, 8, 1.0));
      ref_seq.push_back(testing::to_vec(seq.back()));
    }
    NetConfig net{5, act, 0.5, 3};
    const double p_inf = forward<double>(p, net, seq).probability;
    CHECK(std::abs(p_inf - testing::ref_forward(p, act == CellActivation::relu, ref_seq)) <=
          1e-12);

    VectorXd mask = dropout_mask(rng, 5, 0.5);
    auto ref_mask = testing::to_vec(mask);
    const double p_train = forward<double>(p, net, seq, &mask).probability;
    CHECK(std::abs(p_train -
                   testing::ref_forward(p, act == CellActivation::relu, ref_seq, &ref_mask)) <=
          1e-12);

    auto res = forward<double>(p, net, seq, &mask);
    CHECK(res.cache.steps.size() == 3);
  }
}

TEST_CASE("all-zero parameters predict one half") {
  auto p = LstmParams<double>::zeros(6, 4);
  NetConfig net{4, CellActivation::relu, 0.5, 1};
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    VectorXd x = random_vector(rng, 6, 10.0);
    CHECK(forward<double>(p, net, x).probability == 0.5);
  }
}

TEST_CASE("zero dropout makes the training pass equal the inference pass") {
  Rng rng(8);
  auto p = random_params(rng, 6, 4);
  VectorXd mask = dropout_mask(rng, 4, 0.0);
  CHECK(mask == VectorXd::Ones(4));
  NetConfig net{4, CellActivation::relu, 0.0, 1};
  VectorXd x = random_vector(rng, 6, 1.0);
  CHECK(forward<double>(p, net, x, &mask).probability == forward<double>(p, net, x).probability);
}

TEST_CASE("inverted dropout preserves the expected activation") {
  Rng rng(12345);
  VectorXd h = Eigen::Vector4d(0.7, -1.3, 0.2, 2.5);
  VectorXd sum = VectorXd::Zero(4);
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += dropout_mask(rng, 4, 0.5).cwiseProduct(h);
  VectorXd mean = sum / n;
  for (Eigen::Index k = 0; k < 4; ++k)
    CHECK(std::abs(mean(k) - h(k)) <= 0.01 * std::abs(h(k)));

  VectorXd m = dropout_mask(rng, 1000, 0.3);
  for (Eigen::Index k = 0; k < m.size(); ++k)
    CHECK((m(k) == 0.0 || m(k) == 1.0 / 0.7));
}

TEST_CASE("inference is independent of the dropout setting") {
  Rng rng(3);
  auto p = random_params(rng, 5, 4);
  VectorXd x = random_vector(rng, 5, 1.0);
  NetConfig a{4, CellActivation::relu, 0.0, 1};
  NetConfig b{4, CellActivation::relu, 0.7, 1};
  CHECK(forward<double>(p, a, x).probability == forward<double>(p, b, x).probability);
  CHECK(forward<double>(p, a, x).probability == forward<double>(p, a, x).probability);
}

TEST_CASE("gate ranges and the tanh bound") {
  Rng rng(17);
  auto p = random_params(rng, 8, 6);
  for (auto& g : p.gates) {
    g.wx *= 3.0;
    g.wh *= 3.0;
  }
  LstmState<double> s = LstmState<double>::zeros(6);
  for (int t = 0; t < 50; ++t) {
    auto out = cell_forward(p, CellActivation::tanh, random_vector(rng, 8, 3.0), s);
    for (const VectorXd* g : {&out.gates.input, &out.gates.forget, &out.gates.output}) {
      CHECK(g->minCoeff() > 0.0);
      CHECK(g->maxCoeff() < 1.0);
    }
    CHECK(out.state.h.cwiseAbs().maxCoeff() <= 1.0);
    s = out.state;
  }
}

TEST_CASE("cell errors") {
  auto p = LstmParams<double>::zeros(3, 2);
  CHECK_THROWS_AS(cell_forward(p, CellActivation::tanh, VectorXd(VectorXd::Zero(4)),
                               LstmState<double>::zeros(2)),
                  DimensionMismatch);
  p.gates[kCandidate].wx.setConstant(1.0);
  VectorXd x = VectorXd::Constant(3, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(cell_forward(p, CellActivation::relu, x, LstmState<double>::zeros(2)),
                  NonFiniteState);
}

TEST_CASE("confident correct predictions have near-zero gradients") {
  Rng rng(5);
  auto p = random_params(rng, 6, 4);
  p.b_out = 40.0;
  NetConfig net{4, CellActivation::tanh, 0.0, 1};
  auto fwd = forward<double>(p, net, random_vector(rng, 6, 1.0));
  CHECK(fwd.probability > 1.0 - 1e-15);
  auto g = backward(p, net, fwd.cache, 1);
  for (auto block : g.blocks())
    for (double v : block) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("a dropped unit gets no output-weight gradient") {
  Rng rng(6);
  auto p = random_params(rng, 6, 4);
  NetConfig net{4, CellActivation::tanh, 0.5, 1};
  VectorXd mask = Eigen::Vector4d(2.0, 0.0, 2.0, 0.0);
  auto fwd = forward<double>(p, net, random_vector(rng, 6, 1.0), &mask);
  auto g = backward(p, net, fwd.cache, 0);
  CHECK(g.w_out(1) == 0.0);
  CHECK(g.w_out(3) == 0.0);
  CHECK(g.w_out(0) != 0.0);
}

TEST_CASE("backward rejects a foreign cache") {
  Rng rng(2);
  auto p = random_params(rng, 4, 3);
  NetConfig one{3, CellActivation::tanh, 0.0, 1};
  NetConfig two{3, CellActivation::tanh, 0.0, 2};
  auto fwd = forward<double>(p, one, random_vector(rng, 4, 1.0));
  CHECK_THROWS_AS(backward(p, two, fwd.cache, 1), CacheMismatch);
  auto other = random_params(rng, 5, 3);
  CHECK_THROWS_AS(backward(other, one, fwd.cache, 1), CacheMismatch);
}

TEST_CASE("backward matches central differences") {
  for (auto act : {CellActivation::tanh, CellActivation::relu}) {
    GradCheckOptions opt;
    opt.activation = act;
    auto report = grad_check(opt);
    CHECK(report.max_relative_error < 1e-4);
    CHECK(report.coordinates == LstmParams<double>::zeros(8, 5).parameter_count());
  }
}

TEST_CASE("init_params") {
  Rng a(1), b(1);
  auto p = init_params(a, 122, 64);
  CHECK(p == init_params(b, 122, 64));
  CHECK(p.gates[kInputGate].wx.rows() == 64);
  CHECK(p.gates[kInputGate].wx.cols() == 122);
  CHECK(p.gates[kInputGate].wh.rows() == 64);
  CHECK(p.gates[kInputGate].wh.cols() == 64);
  CHECK(p.gates[kForgetGate].b == VectorXd::Ones(64));
  CHECK(p.gates[kInputGate].b == VectorXd::Zero(64));
  CHECK(p.gates[kCandidate].b == VectorXd::Zero(64));
  CHECK(p.gates[kOutputGate].b == VectorXd::Zero(64));
  CHECK(p.b_out == 0.0);
  for (const auto& g : p.gates) {
    CHECK(g.wx.cwiseAbs().maxCoeff() < 1.0 / std::sqrt(122.0));
    CHECK(g.wh.cwiseAbs().maxCoeff() < 1.0 / std::sqrt(64.0));
  }
  CHECK(p.parameter_count() == 4 * (64 * 122 + 64 * 64 + 64) + 64 + 1);
}
