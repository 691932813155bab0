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

#include "aidl/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_map>

namespace aidl {

const std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "duration",
    "protocol_type",
    "service",
    "flag",
    "src_bytes",
    "dst_bytes",
    "land",
    "wrong_fragment",
    "urgent",
    "hot",
    "num_failed_logins",
    "logged_in",
    "num_compromised",
    "root_shell",
    "su_attempted",
    "num_root",
    "num_file_creations",
    "num_shells",
    "num_access_files",
    "num_outbound_cmds",
    "is_host_login",
    "is_guest_login",
    "count",
    "srv_count",
    "serror_rate",
    "srv_serror_rate",
    "rerror_rate",
    "srv_rerror_rate",
    "same_srv_rate",
    "diff_srv_rate",
    "srv_diff_host_rate",
    "dst_host_count",
    "dst_host_srv_count",
    "dst_host_same_srv_rate",
    "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate",
    "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate",
    "dst_host_srv_serror_rate",
    "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
};

namespace {

// Attack names per category. The NSL-KDD files spell three of these
// differently from the published taxonomy (guess_passwd, processtable,
// httptunnel); both spellings are accepted.
const std::unordered_map<std::string, AttackCategory>& category_table() {
  static const std::unordered_map<std::string, AttackCategory> table = [] {
    std::unordered_map<std::string, AttackCategory> t;
    auto put = [&t](AttackCategory c, std::initializer_list<const char*> names) {
      for (const char* n : names) t.emplace(n, c);
    };
    put(AttackCategory::DoS,
        {"back", "land", "neptune", "pod", "smurf", "teardrop", "mailbomb",
         "proccesstable", "processtable", "udpstorm", "apache2", "worm"});
    put(AttackCategory::R2L,
        {"guess_password", "guess_passwd", "ftp_write", "imap", "phf",
         "multihop", "warezmaster", "xlock", "xsnoop", "snmpguess",
         "snmpgetattack", "httpptunnel", "httptunnel", "sendmail", "named"});
    put(AttackCategory::U2R,
        {"buffer_overflow", "loadmodule", "rootkit", "perl", "sqlattack",
         "xterm", "ps"});
    put(AttackCategory::Probe,
        {"satan", "ipsweep", "nmap", "portsweep", "mscan", "saint"});
    put(AttackCategory::Normal, {"normal"});
    return t;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_numeric(std::string_view token, std::size_t index) {
  double value = 0.0;
  auto first = token.data();
  auto last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value) ||
      value < 0.0 || (is_rate_feature(index) && value > 1.0)) {
    throw NumericParseError(index, std::string(token));
  }
  return value;
}

}  // namespace

std::string_view to_string(AttackCategory category) {
  switch (category) {
    case AttackCategory::DoS: return "DoS";
    case AttackCategory::R2L: return "R2L";
    case AttackCategory::U2R: return "U2R";
    case AttackCategory::Probe: return "Probe";
    case AttackCategory::Normal: return "Normal";
    case AttackCategory::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<AttackCategory> category_from_string(std::string_view name) {
  for (auto c : kAllCategories)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string normalize_label(std::string_view label) {
  label = trim(label);
  if (!label.empty() && label.back() == '.') label.remove_suffix(1);
  std::string out(label);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

AttackCategory categorize_label(std::string_view label) {
  const auto& table = category_table();
  auto it = table.find(normalize_label(label));
  return it == table.end() ? AttackCategory::Unknown : it->second;
}

ConnectionRecord parse_record(std::string_view line, InputFormat /*format*/) {
  line = trim(line);
  std::array<std::string_view, 44> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    std::string_view field =
        line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    if (count < fields.size()) fields[count] = trim(field);
    ++count;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != 42 && count != 43) throw FieldCountError(count);

  ConnectionRecord record;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (is_symbolic_feature(i)) {
      if (fields[i].empty()) throw NumericParseError(i, "");
      record.symbols[symbolic_slot(i)] = std::string(fields[i]);
    } else {
      record.values[i] = parse_numeric(fields[i], i);
    }
  }
  record.label = normalize_label(fields[41]);
  if (record.label.empty()) throw Error("empty class label");
  if (count == 43) {
    int difficulty = 0;
    auto tok = fields[42];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), difficulty);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw NumericParseError(42, std::string(tok));
    record.difficulty = difficulty;
  }
  return record;
}

void for_each_record(std::istream& in, InputFormat format,
                     const std::function<void(ConnectionRecord&&)>& sink) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    ConnectionRecord record;
    try {
      record = parse_record(line, format);
    } catch (const Error& e) {
      throw LineError(number, e.what());
    }
    sink(std::move(record));
  }
  if (in.bad()) throw std::ios_base::failure("read error");
}

std::vector<ConnectionRecord> read_records(std::istream& in, InputFormat format) {
  std::vector<ConnectionRecord> out;
  for_each_record(in, format,
                  [&out](ConnectionRecord&& r) { out.push_back(std::move(r)); });
  return out;
}

std::vector<ConnectionRecord> read_records_file(const std::string& path,
                                                InputFormat format) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_records(in, format);
}

// Statistics ---------------------------------------------------------------

std::uint64_t CountRow::reduction_basis_points() const {
  if (samples == 0) return 0;
  return (samples - distinct) * 10000 / samples;
}

std::string CountRow::reduction_text() const {
  auto bp = reduction_basis_points();
  std::string frac = std::to_string(bp % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(bp / 100) + "." + frac + "%";
}

namespace {

// Exact identity key: feature bit patterns, symbols and label.
std::string dedup_key(const ConnectionRecord& r) {
  std::string key;
  key.reserve(kFeatureCount * 3 + r.label.size() + 32);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (is_symbolic_feature(i)) continue;
    double v = r.values[i] == 0.0 ? 0.0 : r.values[i];
    auto bits = std::bit_cast<std::uint64_t>(v);
    // Variable-length encoding keeps the many small integers and zeros short.
    do {
      auto byte = static_cast<char>(bits & 0x7f);
      bits >>= 7;
      key.push_back(bits ? static_cast<char>(byte | 0x80) : byte);
    } while (bits);
  }
  for (const auto& s : r.symbols) {
    key += s;
    key.push_back('\0');
  }
  key += r.label;
  return key;
}

}  // namespace

void StatsAccumulator::add(const ConnectionRecord& record) {
  const bool attack = is_attack(record.label);
  CountRow& row = attack ? stats_.attacks : stats_.normal;
  ++row.samples;
  ++stats_.total.samples;
  ++stats_.per_label[record.label];
  if (seen_.insert(dedup_key(record)).second) {
    ++row.distinct;
    ++stats_.total.distinct;
  }
}

DatasetStats StatsAccumulator::result() const { return stats_; }

DatasetStats dedup_stats(std::span<const ConnectionRecord> records) {
  StatsAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.result();
}

ClassDistribution class_distribution(
    const std::map<std::string, std::uint64_t>& per_label) {
  ClassDistribution out;
  std::map<AttackCategory, std::uint64_t> by_category;
  for (const auto& [label, count] : per_label) {
    out.labels.push_back({label, count});
    by_category[categorize_label(label)] += count;
  }
  std::stable_sort(out.labels.begin(), out.labels.end(),
                   [](const LabelCount& a, const LabelCount& b) {
                     return a.count > b.count;
                   });
  for (auto [category, count] : by_category) out.categories.push_back({category, count});
  std::stable_sort(out.categories.begin(), out.categories.end(),
                   [](const CategoryCount& a, const CategoryCount& b) {
                     return a.count > b.count;
                   });
  return out;
}

ClassDistribution class_distribution(std::span<const ConnectionRecord> records) {
  std::map<std::string, std::uint64_t> per_label;
  for (const auto& r : records) ++per_label[normalize_label(r.label)];
  return class_distribution(per_label);
}

// Encoding -----------------------------------------------------------------

std::size_t numeric_slot(std::size_t feature_index) {
  return feature_index == 0 ? 0 : feature_index - kSymbolicCount;
}

std::size_t symbolic_slot(std::size_t feature_index) { return feature_index - 1; }

std::size_t EncodingSchema::width_of(std::size_t feature_index) const {
  return is_symbolic_feature(feature_index)
             ? vocabularies[symbolic_slot(feature_index)].size()
             : 1;
}

std::size_t EncodingSchema::offset_of(std::size_t feature_index) const {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < feature_index; ++i) offset += width_of(i);
  return offset;
}

std::size_t EncodingSchema::dimension() const {
  std::size_t d = kNumericCount;
  for (const auto& v : vocabularies) d += v.size();
  return d;
}

EncodingSchema fit_schema(std::span<const ConnectionRecord> records) {
  if (records.empty()) throw EmptyDatasetError();
  EncodingSchema schema;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (is_symbolic_feature(i)) continue;
    double v = records.front().values[i];
    schema.ranges[numeric_slot(i)] = {v, v};
  }
  for (const auto& r : records) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (is_symbolic_feature(i)) continue;
      auto& range = schema.ranges[numeric_slot(i)];
      range.min = std::min(range.min, r.values[i]);
      range.max = std::max(range.max, r.values[i]);
    }
    for (std::size_t s = 0; s < kSymbolicCount; ++s)
      schema.vocabularies[s].push_back(r.symbols[s]);
  }
  for (auto& vocab : schema.vocabularies) {
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  }
  return schema;
}

FeatureVector encode(const ConnectionRecord& record, const EncodingSchema& schema) {
  FeatureVector out;
  out.x = VectorXd::Zero(static_cast<Eigen::Index>(schema.dimension()));
  std::size_t offset = 0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (is_symbolic_feature(i)) {
      const auto& vocab = schema.vocabularies[symbolic_slot(i)];
      const auto& value = record.symbols[symbolic_slot(i)];
      auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
      if (it != vocab.end() && *it == value)
        out.x[static_cast<Eigen::Index>(offset + (it - vocab.begin()))] = 1.0;
      offset += vocab.size();
    } else {
      const auto& range = schema.ranges[numeric_slot(i)];
      double scaled = 0.0;
      if (!range.constant()) {
        scaled = (record.values[i] - range.min) / (range.max - range.min);
        scaled = std::clamp(scaled, 0.0, 1.0);
      }
      out.x[static_cast<Eigen::Index>(offset)] = scaled;
      offset += 1;
    }
  }
  out.category = categorize_label(record.label);
  out.y = out.category == AttackCategory::Normal ? 0 : 1;
  return out;
}

std::vector<FeatureVector> encode_all(std::span<const ConnectionRecord> records,
                                      const EncodingSchema& schema) {
  std::vector<FeatureVector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(encode(r, schema));
  return out;
}

}  // namespace aidl
