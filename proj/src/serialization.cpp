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

#include "aidl/serialization.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace aidl {

using nlohmann::json;

namespace {

void require_format(const json& doc, std::string_view expected) {
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
    throw FormatError("document has no format tag");
  const auto tag = doc["format"].get<std::string>();
  if (tag != expected)
    throw FormatError("unsupported format '" + tag + "', expected '" + std::string(expected) + "'");
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json schema_json(const EncodingSchema& schema) {
  json doc;
  doc["format"] = kSchemaFormat;
  doc["dimension"] = schema.dimension();
  json symbolic = json::array();
  json numeric = json::array();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (is_symbolic_feature(i)) {
      symbolic.push_back({{"feature", kFeatureNames[i]},
                          {"index", i + 1},
                          {"vocabulary", schema.vocabularies[symbolic_slot(i)]}});
    } else {
      const auto& r = schema.ranges[numeric_slot(i)];
      numeric.push_back({{"feature", kFeatureNames[i]},
                         {"index", i + 1},
                         {"min", r.min},
                         {"max", r.max}});
    }
  }
  doc["symbolic"] = std::move(symbolic);
  doc["numeric"] = std::move(numeric);
  return doc;
}

EncodingSchema schema_from(const json& doc) {
  require_format(doc, kSchemaFormat);
  return guarded([&] {
    EncodingSchema schema;
    const auto& symbolic = doc.at("symbolic");
    const auto& numeric = doc.at("numeric");
    if (symbolic.size() != kSymbolicCount || numeric.size() != kNumericCount)
      throw FormatError("schema: wrong number of feature entries");
    for (const auto& entry : symbolic) {
      const auto index = entry.at("index").get<std::size_t>();
      if (index < 1 || !is_symbolic_feature(index - 1))
        throw FormatError("schema: bad symbolic feature index");
      auto vocab = entry.at("vocabulary").get<std::vector<std::string>>();
      if (!std::is_sorted(vocab.begin(), vocab.end()) ||
          std::adjacent_find(vocab.begin(), vocab.end()) != vocab.end())
        throw FormatError("schema: vocabulary must be sorted and distinct");
      schema.vocabularies[symbolic_slot(index - 1)] = std::move(vocab);
    }
    for (const auto& entry : numeric) {
      const auto index = entry.at("index").get<std::size_t>();
      if (index < 1 || index > kFeatureCount || is_symbolic_feature(index - 1))
        throw FormatError("schema: bad numeric feature index");
      NumericRange r{entry.at("min").get<double>(), entry.at("max").get<double>()};
      if (!(r.min <= r.max)) throw FormatError("schema: min exceeds max");
      schema.ranges[numeric_slot(index - 1)] = r;
    }
    if (doc.contains("dimension") && doc["dimension"].get<std::size_t>() != schema.dimension())
      throw FormatError("schema: declared dimension disagrees with vocabularies");
    return schema;
  });
}

json matrix_json(const MatrixXd& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

MatrixXd matrix_from(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (j.at("rows").get<Eigen::Index>() != rows || j.at("cols").get<Eigen::Index>() != cols)
    throw FormatError("model: parameter matrix has the wrong shape");
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw FormatError("model: parameter matrix has the wrong element count");
  MatrixXd m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

VectorXd vector_from(const json& j, Eigen::Index size) {
  auto data = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != size)
    throw FormatError("model: parameter vector has the wrong length");
  return Eigen::Map<VectorXd>(data.data(), size);
}

json train_config_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"rho", c.rho},
          {"decay", c.decay},
          {"epsilon", c.epsilon},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"clip_norm", c.clip_norm},
          {"validation_fraction", c.validation_fraction},
          {"early_stopping_patience", c.early_stopping_patience}};
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.rho = j.at("rho").get<double>();
  c.decay = j.at("decay").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.validation_fraction = j.at("validation_fraction").get<double>();
  c.early_stopping_patience = j.at("early_stopping_patience").get<int>();
  return c;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

// Schema ---------------------------------------------------------------------

std::string schema_to_json(const EncodingSchema& schema) { return schema_json(schema).dump(2); }

EncodingSchema schema_from_json(std::string_view text) { return schema_from(parse(text)); }

std::string schema_checksum(const EncodingSchema& schema) {
  // FNV-1a over the compact canonical rendering.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : schema_json(schema).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return "fnv1a64:" + hex64(h);
}

// Model ----------------------------------------------------------------------

std::string ModelFile::methodology() const {
  return std::holds_alternative<LstmArtifact>(model) ? "Deep learning (LSTM)" : "SVM";
}

double ModelFile::default_threshold() const {
  return std::holds_alternative<LstmArtifact>(model) ? 0.5 : 0.0;
}

double ModelFile::score(const VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != schema.dimension())
    throw SchemaMismatch("encoded width " + std::to_string(x.size()) +
                         " does not match the model schema (" +
                         std::to_string(schema.dimension()) + ")");
  if (const auto* lstm = std::get_if<LstmArtifact>(&model)) {
    std::vector<VectorXd> seq(static_cast<std::size_t>(lstm->net.seq_len), x);
    return predict_proba<double>(lstm->params, lstm->net, seq);
  }
  return svm_predict(std::get<SvmArtifact>(model).model, x).margin;
}

std::string model_to_json(const ModelFile& file) {
  json doc;
  doc["format"] = kModelFormat;
  doc["kind"] = file.kind();
  doc["created"] = file.created;
  doc["schema"] = schema_json(file.schema);
  doc["schema_checksum"] = schema_checksum(file.schema);
  if (const auto* lstm = std::get_if<LstmArtifact>(&file.model)) {
    doc["architecture"] = {{"input", lstm->params.input_size()},
                           {"hidden", lstm->net.hidden},
                           {"activation", to_string(lstm->net.activation)},
                           {"seq_len", lstm->net.seq_len},
                           {"dropout", lstm->net.dropout}};
    doc["train_config"] = train_config_json(lstm->train);
    json params;
    const auto& names = LstmParams<double>::block_names();
    for (std::size_t k = 0; k < kGateCount; ++k) {
      const auto& g = lstm->params.gates[k];
      params[std::string(names[3 * k])] = matrix_json(g.wx);
      params[std::string(names[3 * k + 1])] = matrix_json(g.wh);
      params[std::string(names[3 * k + 2])] =
          std::vector<double>(g.b.data(), g.b.data() + g.b.size());
    }
    params["w_out"] = std::vector<double>(lstm->params.w_out.data(),
                                          lstm->params.w_out.data() + lstm->params.w_out.size());
    params["b_out"] = lstm->params.b_out;
    doc["params"] = std::move(params);
  } else {
    const auto& svm = std::get<SvmArtifact>(file.model);
    doc["architecture"] = {{"input", svm.model.w.size()}, {"lambda", svm.model.lambda}};
    doc["train_config"] = {
        {"lambda", svm.config.lambda}, {"epochs", svm.config.epochs}, {"seed", svm.config.seed}};
    doc["params"] = {{"w", std::vector<double>(svm.model.w.data(),
                                               svm.model.w.data() + svm.model.w.size())},
                     {"b", svm.model.b}};
  }
  return doc.dump(2);
}

ModelFile model_from_json(std::string_view text) {
  const json doc = parse(text);
  require_format(doc, kModelFormat);
  return guarded([&] {
    ModelFile file;
    file.schema = schema_from(doc.at("schema"));
    if (doc.contains("schema_checksum") &&
        doc["schema_checksum"].get<std::string>() != schema_checksum(file.schema))
      throw SchemaMismatch("model: schema checksum mismatch");
    file.created = doc.value("created", "");
    const auto kind = doc.at("kind").get<std::string>();
    const auto& arch = doc.at("architecture");
    const auto& params = doc.at("params");
    const auto input = arch.at("input").get<Eigen::Index>();
    if (static_cast<std::size_t>(input) != file.schema.dimension())
      throw SchemaMismatch("model: input width disagrees with the embedded schema");
    if (kind == "lstm") {
      LstmArtifact a;
      a.net.hidden = arch.at("hidden").get<int>();
      auto act = activation_from_string(arch.at("activation").get<std::string>());
      if (!act) throw FormatError("model: unknown activation");
      a.net.activation = *act;
      a.net.seq_len = arch.at("seq_len").get<int>();
      a.net.dropout = arch.at("dropout").get<double>();
      try {
        a.net.validate();
      } catch (const ConfigError& e) {
        throw FormatError(std::string("model: ") + e.what());
      }
      a.train = train_config_from(doc.at("train_config"));
      const Eigen::Index H = a.net.hidden;
      a.params = LstmParams<double>::zeros(input, H);
      const auto& names = LstmParams<double>::block_names();
      for (std::size_t k = 0; k < kGateCount; ++k) {
        auto& g = a.params.gates[k];
        g.wx = matrix_from(params.at(std::string(names[3 * k])), H, input);
        g.wh = matrix_from(params.at(std::string(names[3 * k + 1])), H, H);
        g.b = vector_from(params.at(std::string(names[3 * k + 2])), H);
      }
      a.params.w_out = vector_from(params.at("w_out"), H);
      a.params.b_out = params.at("b_out").get<double>();
      file.model = std::move(a);
    } else if (kind == "svm") {
      SvmArtifact a;
      const auto& cfg = doc.at("train_config");
      a.config.lambda = cfg.at("lambda").get<double>();
      a.config.epochs = cfg.at("epochs").get<int>();
      a.config.seed = cfg.at("seed").get<std::uint64_t>();
      a.model.w = vector_from(params.at("w"), input);
      a.model.b = params.at("b").get<double>();
      a.model.lambda = arch.at("lambda").get<double>();
      file.model = std::move(a);
    } else {
      throw FormatError("model: unknown kind '" + kind + "'");
    }
    return file;
  });
}

// Report ---------------------------------------------------------------------

std::string report_to_json(const EvalReport& r) {
  json doc;
  doc["format"] = kReportFormat;
  doc["model"] = r.model;
  doc["threshold"] = r.threshold;
  doc["samples"] = r.confusion.total();
  doc["confusion"] = {{"tp", r.confusion.tp},
                      {"tn", r.confusion.tn},
                      {"fp", r.confusion.fp},
                      {"fn", r.confusion.fn}};
  doc["fp_rate"] = optional_json(r.fp_rate());
  doc["fn_rate"] = optional_json(r.fn_rate());
  doc["accuracy"] = optional_json(r.accuracy());
  doc["detection_rate"] = optional_json(r.detection_rate());
  doc["rate_definitions"] = {{"positive_class", "attack"},
                             {"fp_rate", "FP/(FP+TN)"},
                             {"fn_rate", "FN/(FN+TP)"},
                             {"accuracy", "(TP+TN)/(TP+TN+FP+FN)"},
                             {"detection_rate", "TP/(TP+FN)"}};
  json per = json::object();
  for (const auto& [cat, rc] : r.per_category)
    per[std::string(to_string(cat))] = {
        {"flagged", rc.flagged}, {"total", rc.total}, {"recall", optional_json(rc.recall())}};
  doc["per_category"] = std::move(per);
  doc["schema_checksum"] = r.schema_checksum;
  return doc.dump(2);
}

EvalReport report_from_json(std::string_view text) {
  const json doc = parse(text);
  require_format(doc, kReportFormat);
  return guarded([&] {
    EvalReport r;
    r.model = doc.at("model").get<std::string>();
    r.threshold = doc.at("threshold").get<double>();
    const auto& c = doc.at("confusion");
    r.confusion = {c.at("tp").get<std::uint64_t>(), c.at("tn").get<std::uint64_t>(),
                   c.at("fp").get<std::uint64_t>(), c.at("fn").get<std::uint64_t>()};
    for (const auto& [name, entry] : doc.at("per_category").items()) {
      auto cat = category_from_string(name);
      if (!cat) throw FormatError("report: unknown category '" + name + "'");
      r.per_category[*cat] = {entry.at("flagged").get<std::uint64_t>(),
                              entry.at("total").get<std::uint64_t>()};
    }
    r.schema_checksum = doc.value("schema_checksum", "");
    return r;
  });
}

// Trace ----------------------------------------------------------------------

std::string trace_to_json(const TrainTrace& trace) {
  json doc;
  doc["format"] = kTraceFormat;
  doc["total_steps"] = trace.total_steps;
  doc["stopped_early"] = trace.stopped_early;
  json epochs = json::array();
  for (const auto& e : trace.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"loss", e.loss},
                      {"train_acc", e.train_accuracy},
                      {"val_loss", optional_json(e.val_loss)},
                      {"val_acc", optional_json(e.val_accuracy)},
                      {"steps", e.steps},
                      {"seconds", e.seconds}});
  doc["epochs"] = std::move(epochs);
  return doc.dump(2);
}

TrainTrace trace_from_json(std::string_view text) {
  const json doc = parse(text);
  require_format(doc, kTraceFormat);
  return guarded([&] {
    TrainTrace t;
    t.total_steps = doc.at("total_steps").get<std::uint64_t>();
    t.stopped_early = doc.at("stopped_early").get<bool>();
    for (const auto& e : doc.at("epochs")) {
      EpochStats s;
      s.epoch = e.at("epoch").get<int>();
      s.loss = e.at("loss").get<double>();
      s.train_accuracy = e.at("train_acc").get<double>();
      s.val_loss = optional_from(e.at("val_loss"));
      s.val_accuracy = optional_from(e.at("val_acc"));
      s.steps = e.at("steps").get<std::uint64_t>();
      s.seconds = e.at("seconds").get<double>();
      t.epochs.push_back(s);
    }
    return t;
  });
}

std::string trace_to_csv(const TrainTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,loss,train_acc,val_acc\n";
  for (const auto& e : trace.epochs) {
    out << e.epoch << ',' << e.loss << ',' << e.train_accuracy << ',';
    if (e.val_accuracy) out << *e.val_accuracy;
    out << '\n';
  }
  return out.str();
}

std::string comparison_to_json(const ComparisonTable& table) {
  json doc;
  doc["format"] = kComparisonFormat;
  doc["columns"] = {"Methodology", "False-positive FP", "False negative FN", "Accuracy"};
  json rows = json::array();
  // Same rounded strings as the text table, plus the unrounded values.
  for (const auto& r : table.rows)
    rows.push_back({{"methodology", r.methodology},
                    {"fp", format_rate(r.fp)},
                    {"fn", format_rate(r.fn)},
                    {"accuracy", format_rate(r.accuracy)},
                    {"fp_exact", optional_json(r.fp)},
                    {"fn_exact", optional_json(r.fn)},
                    {"accuracy_exact", optional_json(r.accuracy)}});
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

// Files ----------------------------------------------------------------------

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::ios_base::failure("write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::ios_base::failure("cannot rename " + tmp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace aidl
