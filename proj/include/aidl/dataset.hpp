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

#ifndef AIDL_DATASET_HPP
#define AIDL_DATASET_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aidl/numerics.hpp"

namespace aidl {

inline constexpr std::size_t kFeatureCount = 41;
inline constexpr std::size_t kSymbolicCount = 3;
inline constexpr std::size_t kNumericCount = kFeatureCount - kSymbolicCount;

/// Zero-based positions of protocol_type (F2), service (F3) and flag (F4).
inline constexpr std::array<std::size_t, kSymbolicCount> kSymbolicFeatures = {1, 2, 3};

/// Canonical KDD feature names, F1..F41.
extern const std::array<std::string_view, kFeatureCount> kFeatureNames;

constexpr bool is_symbolic_feature(std::size_t index) {
  return index >= 1 && index <= 3;
}

/// Rate features (F25..F31, F34..F41) must lie in [0, 1].
constexpr bool is_rate_feature(std::size_t index) {
  return (index >= 24 && index <= 30) || (index >= 33 && index <= 40);
}

enum class InputFormat { kdd, nsl };

enum class AttackCategory { DoS, R2L, U2R, Probe, Normal, Unknown };

std::string_view to_string(AttackCategory category);
std::optional<AttackCategory> category_from_string(std::string_view name);
inline constexpr std::array<AttackCategory, 6> kAllCategories = {
    AttackCategory::DoS,    AttackCategory::R2L,    AttackCategory::U2R,
    AttackCategory::Probe,  AttackCategory::Normal, AttackCategory::Unknown};

/// One KDD99 / NSL-KDD connection line.
///
/// `values` holds all 41 features in F1..F41 order; the three symbolic slots
/// are 0 there and their text lives in `symbols` (protocol, service, flag).
struct ConnectionRecord {
  std::array<double, kFeatureCount> values{};
  std::array<std::string, kSymbolicCount> symbols;
  std::string label;
  std::optional<int> difficulty;

  const std::string& protocol() const { return symbols[0]; }
  const std::string& service() const { return symbols[1]; }
  const std::string& flag() const { return symbols[2]; }

  bool operator==(const ConnectionRecord&) const = default;
};

/// Lowercases and strips a trailing '.'.
std::string normalize_label(std::string_view label);

AttackCategory categorize_label(std::string_view label);

inline bool is_attack(std::string_view label) {
  return categorize_label(label) != AttackCategory::Normal;
}

/// Parses one comma-separated line. Both formats accept 42 fields (no
/// difficulty) and 43 fields (trailing difficulty); `format` only records the
/// caller's expectation and does not change acceptance.
ConnectionRecord parse_record(std::string_view line,
                              InputFormat format = InputFormat::nsl);

/// Streams records out of a text stream. Blank lines are skipped. Parse errors
/// are rethrown as LineError carrying the 1-based line number.
void for_each_record(std::istream& in, InputFormat format,
                     const std::function<void(ConnectionRecord&&)>& sink);

std::vector<ConnectionRecord> read_records(std::istream& in, InputFormat format);
std::vector<ConnectionRecord> read_records_file(const std::string& path,
                                                InputFormat format);

// Statistics ---------------------------------------------------------------

struct CountRow {
  std::uint64_t samples = 0;
  std::uint64_t distinct = 0;

  /// 100 * (1 - distinct / samples) in hundredths of a percent, truncated.
  std::uint64_t reduction_basis_points() const;
  double reduction_percent() const {
    return static_cast<double>(reduction_basis_points()) / 100.0;
  }
  /// "78.05%" style rendering.
  std::string reduction_text() const;
};

struct DatasetStats {
  CountRow attacks;
  CountRow normal;
  CountRow total;
  std::map<std::string, std::uint64_t> per_label;
};

/// Streaming accumulator behind dedup_stats. Records are duplicates when all
/// 41 features and the normalized label agree; difficulty is ignored.
class StatsAccumulator {
 public:
  void add(const ConnectionRecord& record);
  DatasetStats result() const;

 private:
  DatasetStats stats_;
  std::unordered_set<std::string> seen_;
};

DatasetStats dedup_stats(std::span<const ConnectionRecord> records);

struct LabelCount {
  std::string label;
  std::uint64_t count = 0;
};

struct CategoryCount {
  AttackCategory category;
  std::uint64_t count = 0;
};

struct ClassDistribution {
  /// Descending by count, ties broken by label.
  std::vector<LabelCount> labels;
  /// Descending by count, ties broken by category order.
  std::vector<CategoryCount> categories;

  bool empty() const { return labels.empty(); }
};

ClassDistribution class_distribution(std::span<const ConnectionRecord> records);
ClassDistribution class_distribution(
    const std::map<std::string, std::uint64_t>& per_label);

// Encoding -----------------------------------------------------------------

struct NumericRange {
  double min = 0.0;
  double max = 0.0;
  bool constant() const { return min == max; }
  bool operator==(const NumericRange&) const = default;
};

/// Learned on training data: sorted vocabularies for the symbolic features
/// and min/max for the 38 numeric ones.
struct EncodingSchema {
  std::array<std::vector<std::string>, kSymbolicCount> vocabularies;
  std::array<NumericRange, kNumericCount> ranges;

  /// kNumericCount + sum of vocabulary sizes.
  std::size_t dimension() const;

  /// Offset of feature `index` (0-based F-number) in the encoded vector.
  std::size_t offset_of(std::size_t feature_index) const;
  /// Width of feature `index`: 1 for numeric, vocabulary size for symbolic.
  std::size_t width_of(std::size_t feature_index) const;

  bool operator==(const EncodingSchema&) const = default;
};

/// Position of feature `feature_index` among the numeric features.
std::size_t numeric_slot(std::size_t feature_index);
/// Position of feature `feature_index` among the symbolic features.
std::size_t symbolic_slot(std::size_t feature_index);

EncodingSchema fit_schema(std::span<const ConnectionRecord> records);

struct FeatureVector {
  VectorXd x;
  int y = 0;
  AttackCategory category = AttackCategory::Normal;
};

/// Features are laid out in F1..F41 order: numeric features take one slot
/// scaled to [0,1] by (v-min)/(max-min) and clamped; symbolic features take a
/// one-hot block, all zeros for unseen values. Constant features encode to 0.
FeatureVector encode(const ConnectionRecord& record, const EncodingSchema& schema);

std::vector<FeatureVector> encode_all(std::span<const ConnectionRecord> records,
                                      const EncodingSchema& schema);

}  // namespace aidl

#endif  // AIDL_DATASET_HPP
