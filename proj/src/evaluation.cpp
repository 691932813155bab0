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

#include "aidl/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace aidl {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

ConfusionMatrix confusion_at(std::span<const Score> scores, double threshold) {
  ConfusionMatrix cm;
  for (const auto& s : scores) {
    const bool flagged = s.value > threshold;
    if (s.y) {
      flagged ? ++cm.tp : ++cm.fn;
    } else {
      flagged ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

EvalReport evaluate(std::span<const Score> scores, double threshold, std::string model) {
  if (scores.empty()) throw EmptyInputError();
  EvalReport report;
  report.model = std::move(model);
  report.threshold = threshold;
  report.confusion = confusion_at(scores, threshold);
  for (const auto& s : scores) {
    if (!s.y) continue;
    auto& rc = report.per_category[s.category];
    ++rc.total;
    if (s.value > threshold) ++rc.flagged;
  }
  return report;
}

std::vector<SweepPoint> threshold_sweep(std::span<const Score> scores, int n) {
  if (scores.empty()) throw EmptyInputError();
  if (n < 2) throw ConfigError("threshold_sweep needs n >= 2");

  std::vector<double> attack_scores;
  std::vector<double> normal_scores;
  for (const auto& s : scores) (s.y ? attack_scores : normal_scores).push_back(s.value);
  std::sort(attack_scores.begin(), attack_scores.end());
  std::sort(normal_scores.begin(), normal_scores.end());

  auto [lo_it, hi_it] = std::minmax_element(
      scores.begin(), scores.end(),
      [](const Score& a, const Score& b) { return a.value < b.value; });
  const double lo = lo_it->value;
  const double hi = hi_it->value;

  auto count_above = [](const std::vector<double>& sorted, double t) {
    return static_cast<std::uint64_t>(sorted.end() -
                                      std::upper_bound(sorted.begin(), sorted.end(), t));
  };

  std::vector<SweepPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    SweepPoint p;
    p.threshold = k == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    p.confusion.tp = count_above(attack_scores, p.threshold);
    p.confusion.fn = attack_scores.size() - p.confusion.tp;
    p.confusion.fp = count_above(normal_scores, p.threshold);
    p.confusion.tn = normal_scores.size() - p.confusion.fp;
    p.fp_rate = ratio(p.confusion.fp, p.confusion.fp + p.confusion.tn);
    p.detection_rate = ratio(p.confusion.tp, p.confusion.tp + p.confusion.fn);
    out.push_back(p);
  }
  return out;
}

std::string format_rate(const std::optional<double>& rate) {
  if (!rate) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *rate);
  return buf;
}

ComparisonTable compare(std::span<const EvalReport> reports) {
  ComparisonTable table;
  for (const auto& r : reports)
    table.rows.push_back({r.model, r.fp_rate(), r.fn_rate(), r.accuracy()});
  return table;
}

namespace {
constexpr const char* kHeaders[4] = {"Methodology", "False-positive FP", "False negative FN",
                                     "Accuracy"};

std::string pad_right(const std::string& s, std::size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}
std::string pad_left(const std::string& s, std::size_t width) {
  return std::string(width > s.size() ? width - s.size() : 0, ' ') + s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace

std::string ComparisonTable::render_text() const {
  std::size_t name_width = std::string(kHeaders[0]).size();
  for (const auto& r : rows) name_width = std::max(name_width, r.methodology.size());

  std::ostringstream out;
  out << pad_right(kHeaders[0], name_width);
  for (int c = 1; c < 4; ++c) out << " | " << kHeaders[c];
  out << '\n';
  out << std::string(name_width, '-');
  for (int c = 1; c < 4; ++c) out << "-|-" << std::string(std::string(kHeaders[c]).size(), '-');
  out << '\n';
  for (const auto& r : rows) {
    const std::string cells[3] = {format_rate(r.fp), format_rate(r.fn), format_rate(r.accuracy)};
    out << pad_right(r.methodology, name_width);
    for (int c = 1; c < 4; ++c)
      out << " | " << pad_left(cells[c - 1], std::string(kHeaders[c]).size());
    out << '\n';
  }
  return out.str();
}

std::string ComparisonTable::render_csv() const {
  std::ostringstream out;
  out << kHeaders[0] << ',' << kHeaders[1] << ',' << kHeaders[2] << ',' << kHeaders[3] << '\n';
  for (const auto& r : rows)
    out << csv_field(r.methodology) << ',' << format_rate(r.fp) << ',' << format_rate(r.fn) << ','
        << format_rate(r.accuracy) << '\n';
  return out.str();
}

}  // namespace aidl
