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

#ifndef AIDL_EVALUATION_HPP
#define AIDL_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aidl/dataset.hpp"

namespace aidl {

/// A model output for one record: probability (LSTM) or raw margin (SVM).
struct Score {
  double value = 0.0;
  int y = 0;
  AttackCategory category = AttackCategory::Normal;
};

/// Positive class is "attack".
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// num / den, absent when den is zero.
std::optional<double> ratio(std::uint64_t num, std::uint64_t den);

struct CategoryRecall {
  std::uint64_t flagged = 0;
  std::uint64_t total = 0;
  std::optional<double> recall() const { return ratio(flagged, total); }
  bool operator==(const CategoryRecall&) const = default;
};

/// FP rate = FP/(FP+TN), FN rate = FN/(FN+TP), detection rate = TP/(TP+FN),
/// accuracy = (TP+TN)/total. Ratios with a zero denominator are absent.
struct EvalReport {
  std::string model;
  double threshold = 0.5;
  ConfusionMatrix confusion;
  std::map<AttackCategory, CategoryRecall> per_category;
  /// Checksum of the encoding schema that produced the scored vectors.
  std::string schema_checksum;

  std::optional<double> fp_rate() const { return ratio(confusion.fp, confusion.fp + confusion.tn); }
  std::optional<double> fn_rate() const { return ratio(confusion.fn, confusion.fn + confusion.tp); }
  std::optional<double> detection_rate() const {
    return ratio(confusion.tp, confusion.tp + confusion.fn);
  }
  std::optional<double> accuracy() const {
    return ratio(confusion.tp + confusion.tn, confusion.total());
  }

  bool operator==(const EvalReport&) const = default;
};

/// Flags a record as attack when score > threshold.
EvalReport evaluate(std::span<const Score> scores, double threshold,
                    std::string model = {});

ConfusionMatrix confusion_at(std::span<const Score> scores, double threshold);

struct SweepPoint {
  double threshold = 0.0;
  ConfusionMatrix confusion;
  std::optional<double> fp_rate;
  std::optional<double> detection_rate;
};

/// `n` evenly spaced thresholds from the minimum to the maximum score.
std::vector<SweepPoint> threshold_sweep(std::span<const Score> scores, int n);

struct ComparisonRow {
  std::string methodology;
  std::optional<double> fp;
  std::optional<double> fn;
  std::optional<double> accuracy;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;

  /// Aligned text table:
  ///   Methodology <pad> | False-positive FP | False negative FN | Accuracy
  /// with rates to four decimals and "n/a" for undefined rates.
  std::string render_text() const;
  /// "Methodology,False-positive FP,False negative FN,Accuracy" plus rows.
  std::string render_csv() const;
};

/// One row per report, in input order, no deduplication.
ComparisonTable compare(std::span<const EvalReport> reports);

/// Four-decimal fixed rendering used by every table format.
std::string format_rate(const std::optional<double>& rate);

}  // namespace aidl

#endif  // AIDL_EVALUATION_HPP
