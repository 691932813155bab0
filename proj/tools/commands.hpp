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

#ifndef AIDL_TOOLS_COMMANDS_HPP
#define AIDL_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aidl/dataset.hpp"
#include "aidl/lstm.hpp"
#include "aidl/svm.hpp"
#include "aidl/training.hpp"

namespace aidl::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kParseError = 2,
  kDivergence = 3,
  kMismatch = 4,
  kGradCheckFailed = 5,
};

struct StatsOptions {
  std::string input;
  InputFormat format = InputFormat::nsl;
  bool json = false;
};

struct TrainOptions {
  std::string model = "lstm";
  std::string train;
  std::string out;
  InputFormat format = InputFormat::nsl;
  NetConfig net;
  TrainConfig lstm;
  SvmConfig svm;
  /// Unset means the per-model default (20 for lstm, 10 for svm).
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  /// Fixed "created" field; used to produce byte-identical files.
  std::optional<std::string> timestamp;
};

struct EvalOptions {
  std::string model;
  std::string test;
  std::string out;
  InputFormat format = InputFormat::nsl;
  std::optional<double> threshold;
  std::optional<std::string> name;
};

struct CompareOptions {
  std::vector<std::string> reports;
  bool csv = false;
  bool json = false;
};

struct GradCheckCliOptions {
  GradCheckOptions check;
};

int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err);
int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const GradCheckCliOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// "4,898,431".
std::string with_thousands(std::uint64_t value);

}  // namespace aidl::cli

#endif  // AIDL_TOOLS_COMMANDS_HPP
