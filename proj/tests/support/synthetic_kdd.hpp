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

#ifndef AIDL_TESTS_SYNTHETIC_KDD_HPP
#define AIDL_TESTS_SYNTHETIC_KDD_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace aidl::testing {

struct SyntheticOptions {
  std::size_t records = 2000;
  std::uint64_t seed = 7;
  /// Fraction of lines that repeat an earlier line verbatim.
  double duplicate_fraction = 0.0;
  /// Append the NSL-KDD difficulty column.
  bool nsl = true;
  /// Fraction of records whose features are drawn from the other class's
  /// profile, so no classifier is perfect.
  double overlap = 0.03;
};

/// KDD-layout lines whose per-class feature profiles loosely follow the real
/// corpus (neptune SYN floods, smurf echo replies, scans, login abuse, ...).
/// Deterministic for a given options value.
std::vector<std::string> synthetic_kdd_lines(const SyntheticOptions& opt);

std::string synthetic_kdd_text(const SyntheticOptions& opt);

}  // namespace aidl::testing

#endif  // AIDL_TESTS_SYNTHETIC_KDD_HPP
