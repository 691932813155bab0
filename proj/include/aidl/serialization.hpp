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

#ifndef AIDL_SERIALIZATION_HPP
#define AIDL_SERIALIZATION_HPP

#include <string>
#include <string_view>
#include <variant>

#include "aidl/dataset.hpp"
#include "aidl/evaluation.hpp"
#include "aidl/lstm.hpp"
#include "aidl/svm.hpp"
#include "aidl/training.hpp"

namespace aidl {

inline constexpr std::string_view kSchemaFormat = "aidl-schema/1";
inline constexpr std::string_view kModelFormat = "aidl-model/1";
inline constexpr std::string_view kReportFormat = "aidl-report/1";
inline constexpr std::string_view kTraceFormat = "aidl-trace/1";
inline constexpr std::string_view kComparisonFormat = "aidl-comparison/1";

struct LstmArtifact {
  NetConfig net;
  TrainConfig train;
  LstmParams<double> params;
};

struct SvmArtifact {
  SvmConfig config;
  SvmModel model;
};

/// Everything needed to score raw records: the schema learned at training
/// time and the fitted model.
struct ModelFile {
  EncodingSchema schema;
  std::variant<LstmArtifact, SvmArtifact> model;
  /// ISO-8601 UTC creation time; the only non-deterministic field.
  std::string created;

  std::string_view kind() const {
    return std::holds_alternative<LstmArtifact>(model) ? "lstm" : "svm";
  }
  /// Row label used in comparison tables.
  std::string methodology() const;
  /// 0.5 on the probability for lstm, 0 on the margin for svm.
  double default_threshold() const;
  /// Probability (lstm) or margin (svm) for an encoded record.
  double score(const VectorXd& x) const;
};

// All documents are serialized as JSON text. Parsing functions throw
// FormatError on malformed input or an unknown "format" tag.

std::string schema_checksum(const EncodingSchema& schema);
std::string schema_to_json(const EncodingSchema& schema);
EncodingSchema schema_from_json(std::string_view text);

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(std::string_view text);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

std::string trace_to_json(const TrainTrace& trace);
TrainTrace trace_from_json(std::string_view text);
std::string trace_to_csv(const TrainTrace& trace);

std::string comparison_to_json(const ComparisonTable& table);

/// Writes to "<path>.tmp" and renames over `path`, so readers never observe a
/// partial file.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

std::string utc_timestamp();

}  // namespace aidl

#endif  // AIDL_SERIALIZATION_HPP
