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
#include <vector>

#include "aidl/evaluation.hpp"
#include "aidl/numerics.hpp"
#include "oracles.hpp"

using namespace aidl;

namespace {

std::vector<Score> counts(int tn, int fp, int fn, int tp) {
  std::vector<Score> s;
  for (int i = 0; i < tn; ++i) s.push_back({0.1, 0, AttackCategory::Normal});
  for (int i = 0; i < fp; ++i) s.push_back({0.9, 0, AttackCategory::Normal});
  for (int i = 0; i < fn; ++i) s.push_back({0.1, 1, AttackCategory::DoS});
  for (int i = 0; i < tp; ++i) s.push_back({0.9, 1, AttackCategory::Probe});
  return s;
}

std::vector<Score> random_scores(Rng& rng, std::size_t n) {
  std::vector<Score> s(n);
  for (auto& x : s) {
    x.value = rng.uniform();
    x.y = static_cast<int>(rng.below(2));
    x.category = x.y ? AttackCategory::DoS : AttackCategory::Normal;
  }
  return s;
}

}  // namespace

TEST_CASE("rates from counts") {
  auto r = evaluate(counts(90, 10, 3, 97), 0.5, "m");
  CHECK(r.confusion == ConfusionMatrix{97, 90, 10, 3});
  CHECK(*r.fp_rate() == 0.1);
  CHECK(*r.fn_rate() == 0.03);
  CHECK(*r.accuracy() == 0.935);
  CHECK(*r.detection_rate() == 0.97);

  auto perfect = evaluate(counts(40, 0, 0, 60), 0.5);
  CHECK(*perfect.fp_rate() == 0.0);
  CHECK(*perfect.fn_rate() == 0.0);
  CHECK(*perfect.accuracy() == 1.0);
}

TEST_CASE("undefined rates are absent") {
  auto attacks_only = evaluate(counts(0, 0, 2, 8), 0.5);
  CHECK_FALSE(attacks_only.fp_rate().has_value());
  CHECK(attacks_only.fn_rate().has_value());
  CHECK(format_rate(attacks_only.fp_rate()) == "n/a");

  auto normals_only = evaluate(counts(5, 5, 0, 0), 0.5);
  CHECK_FALSE(normals_only.fn_rate().has_value());
  CHECK_FALSE(normals_only.detection_rate().has_value());

  CHECK_THROWS_AS(evaluate({}, 0.5), EmptyInputError);
}

TEST_CASE("per-category recall") {
  auto r = evaluate(counts(1, 1, 4, 6), 0.5);
  CHECK(r.per_category.at(AttackCategory::DoS) == CategoryRecall{0, 4});
  CHECK(r.per_category.at(AttackCategory::Probe) == CategoryRecall{6, 6});
  CHECK(*r.per_category.at(AttackCategory::Probe).recall() == 1.0);
  CHECK(r.per_category.count(AttackCategory::Normal) == 0);
}

TEST_CASE("evaluation invariants on random scores") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_scores(rng, 300);
    const double t = rng.uniform();
    auto r = evaluate(s, t);
    CHECK(r.confusion.total() == s.size());
    CHECK(*r.accuracy() ==
          doctest::Approx(1.0 - static_cast<double>(r.confusion.fp + r.confusion.fn) / 300.0)
              .epsilon(1e-15));
    CHECK(*r.detection_rate() + *r.fn_rate() == doctest::Approx(1.0).epsilon(1e-15));

    auto shuffled = s;
    shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(evaluate(shuffled, t) == r);
  }
}

TEST_CASE("threshold sweep") {
  Rng rng(5);
  auto s = random_scores(rng, 500);
  auto sweep = threshold_sweep(s, 11);
  REQUIRE(sweep.size() == 11);
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end(), [](auto& a, auto& b) {
    return a.value < b.value;
  });
  CHECK(sweep.front().threshold == lo->value);
  CHECK(sweep.back().threshold == hi->value);
  CHECK(*sweep.back().fp_rate == 0.0);
  CHECK(*sweep.back().detection_rate == 0.0);

  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i].threshold > sweep[i - 1].threshold);
    CHECK(*sweep[i].fp_rate <= *sweep[i - 1].fp_rate);
  }
  for (const auto& p : sweep) CHECK(p.confusion == confusion_at(s, p.threshold));

  std::vector<double> score;
  std::vector<int> label;
  for (const auto& x : s) score.push_back(x.value), label.push_back(x.y);
  for (const auto& p : sweep) {
    auto k = testing::ref_confusion(score, label, p.threshold);
    CHECK(p.confusion == ConfusionMatrix{k.tp, k.tn, k.fp, k.fn});
  }

  auto below = evaluate(s, lo->value - 1.0);
  CHECK(*below.fp_rate() == 1.0);
  CHECK(*below.detection_rate() == 1.0);

  CHECK_THROWS_AS(threshold_sweep(s, 1), ConfigError);
  CHECK_THROWS_AS(threshold_sweep({}, 5), EmptyInputError);
}

TEST_CASE("comparison table layout") {
  ComparisonTable table;
  table.rows.push_back({"Deep learning (LSTM)", 0.01, 0.03, 0.9676});
  table.rows.push_back({"SVM", 0.1, std::nullopt, 0.87});
  CHECK(table.render_text() ==
        "Methodology          | False-positive FP | False negative FN | Accuracy\n"
        "---------------------|-------------------|-------------------|---------\n"
        "Deep learning (LSTM) |            0.0100 |            0.0300 |   0.9676\n"
        "SVM                  |            0.1000 |               n/a |   0.8700\n");
  CHECK(table.render_csv() ==
        "Methodology,False-positive FP,False negative FN,Accuracy\n"
        "Deep learning (LSTM),0.0100,0.0300,0.9676\n"
        "SVM,0.1000,n/a,0.8700\n");
}

TEST_CASE("compare keeps order and duplicates") {
  std::vector<EvalReport> reports = {evaluate(counts(90, 10, 3, 97), 0.5, "A"),
                                     evaluate(counts(50, 0, 0, 50), 0.5, "B"),
                                     evaluate(counts(90, 10, 3, 97), 0.5, "A")};
  auto t = compare(reports);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].methodology == "A");
  CHECK(t.rows[1].methodology == "B");
  CHECK(*t.rows[0].fp == 0.1);
  CHECK(t.rows[0].accuracy == t.rows[2].accuracy);

  auto single = compare(std::span(reports).first(1)).render_text();
  CHECK(std::count(single.begin(), single.end(), '\n') == 3);
}
