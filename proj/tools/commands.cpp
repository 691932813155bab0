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

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "aidl/evaluation.hpp"
#include "aidl/serialization.hpp"
#include "json.hpp"

namespace aidl::cli {

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string pad_left(const std::string& s, std::size_t w) {
  return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
}

std::string rate_or_na(const std::optional<double>& r) { return format_rate(r); }

// Reads, reporting failures as exit codes through `err`.
std::optional<std::vector<ConnectionRecord>> load_records(const std::string& path,
                                                           InputFormat format,
                                                           std::ostream& err, int& code) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open " << path << "\n";
    code = kIoError;
    return std::nullopt;
  }
  try {
    return read_records(in, format);
  } catch (const LineError& e) {
    err << "parse error in " << path << ": " << e.what() << "\n";
    code = kParseError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    code = kIoError;
  }
  return std::nullopt;
}

void print_stats_table(const DatasetStats& s, std::ostream& out) {
  const std::string h1 = "Number of samples";
  const std::string h2 = "Number of distinct samples";
  const std::string h3 = "Possible reduction percentage";
  out << pad_right("", 8) << "  " << h1 << "  " << h2 << "  " << h3 << "\n";
  auto row = [&](const char* name, const CountRow& r) {
    out << pad_right(name, 8) << "  " << pad_left(with_thousands(r.samples), h1.size()) << "  "
        << pad_left(with_thousands(r.distinct), h2.size()) << "  "
        << pad_left(r.reduction_text(), h3.size()) << "\n";
  };
  row("Attacks", s.attacks);
  row("Normal", s.normal);
  row("Total", s.total);
}

nlohmann::json count_row_json(const CountRow& r) {
  return {{"samples", r.samples},
          {"distinct", r.distinct},
          {"reduction_percent", r.reduction_percent()},
          {"reduction", r.reduction_text()}};
}

}  // namespace

std::string with_thousands(std::uint64_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    out += digits[static_cast<std::size_t>(i)];
    if ((n - 1 - i) % 3 == 0 && i != n - 1) out += ',';
  }
  return out;
}

int cmd_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err) {
  std::ifstream in(opt.input);
  if (!in) {
    err << "error: cannot open " << opt.input << "\n";
    return kIoError;
  }
  StatsAccumulator acc;
  try {
    for_each_record(in, opt.format, [&acc](ConnectionRecord&& r) { acc.add(r); });
  } catch (const LineError& e) {
    err << "parse error in " << opt.input << ": " << e.what() << "\n";
    return kParseError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  const DatasetStats stats = acc.result();
  const ClassDistribution dist = class_distribution(stats.per_label);

  if (opt.json) {
    nlohmann::json doc;
    doc["format"] = "aidl-stats/1";
    doc["attacks"] = count_row_json(stats.attacks);
    doc["normal"] = count_row_json(stats.normal);
    doc["total"] = count_row_json(stats.total);
    auto labels = nlohmann::json::array();
    for (const auto& l : dist.labels)
      labels.push_back({{"label", l.label},
                        {"category", to_string(categorize_label(l.label))},
                        {"count", l.count}});
    doc["labels"] = std::move(labels);
    auto cats = nlohmann::json::array();
    for (const auto& c : dist.categories)
      cats.push_back({{"category", to_string(c.category)}, {"count", c.count}});
    doc["categories"] = std::move(cats);
    out << doc.dump(2) << "\n";
    return kOk;
  }

  print_stats_table(stats, out);
  out << "\nClass distribution\n";
  std::size_t width = 5;
  for (const auto& l : dist.labels) width = std::max(width, l.label.size());
  for (const auto& l : dist.labels)
    out << pad_right(l.label, width) << "  " << pad_left(with_thousands(l.count), 11) << "  "
        << to_string(categorize_label(l.label)) << "\n";
  out << "\nCategory distribution\n";
  for (const auto& c : dist.categories)
    out << pad_right(std::string(to_string(c.category)), width) << "  "
        << pad_left(with_thousands(c.count), 11) << "\n";
  return kOk;
}

int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  TrainOptions o = opt;
  const bool is_lstm = o.model == "lstm";
  if (!is_lstm && o.model != "svm") {
    err << "error: --model must be lstm or svm\n";
    return kParseError;
  }
  if (o.epochs) {
    o.lstm.epochs = *o.epochs;
    o.svm.epochs = *o.epochs;
  }
  if (o.seed) {
    o.lstm.seed = *o.seed;
    o.svm.seed = *o.seed;
  }
  try {
    if (is_lstm) {
      o.net.validate();
      o.lstm.validate();
    } else {
      o.svm.validate();
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  int code = kOk;
  auto records = load_records(o.train, o.format, err, code);
  if (!records) return code;
  if (records->empty()) {
    err << "error: " << o.train << " contains no records\n";
    return kParseError;
  }

  ModelFile file;
  file.schema = fit_schema(*records);
  file.created = o.timestamp.value_or(utc_timestamp());
  const auto data = encode_all(*records, file.schema);
  records->clear();

  std::optional<TrainTrace> trace;
  try {
    if (is_lstm) {
      auto result = train<double>(data, o.net, o.lstm);
      file.model = LstmArtifact{o.net, o.lstm, std::move(result.params)};
      trace = std::move(result.trace);
    } else {
      file.model = SvmArtifact{o.svm, svm_fit(data, o.svm)};
    }
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << "\n";
    return kDivergence;
  }

  try {
    write_file_atomic(o.out, model_to_json(file));
    if (trace) {
      write_file_atomic(o.out + ".trace.json", trace_to_json(*trace));
      write_file_atomic(o.out + ".trace.csv", trace_to_csv(*trace));
    }
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  out << "model: " << file.kind() << "  records: " << data.size()
      << "  input dimension: " << file.schema.dimension() << "\n";
  if (trace) {
    for (const auto& e : trace->epochs) {
      out << "epoch " << e.epoch << "  loss " << fixed(e.loss, 6) << "  train_acc "
          << fixed(e.train_accuracy, 4);
      if (e.val_accuracy) out << "  val_acc " << fixed(*e.val_accuracy, 4);
      out << "\n";
    }
  }
  out << "wrote " << o.out << "\n";
  return kOk;
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  ModelFile model;
  try {
    model = model_from_json(read_file(opt.model));
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const SchemaMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const FormatError& e) {
    err << "error: " << opt.model << ": " << e.what() << "\n";
    return kParseError;
  }

  int code = kOk;
  auto records = load_records(opt.test, opt.format, err, code);
  if (!records) return code;
  if (records->empty()) {
    err << "error: " << opt.test << " contains no records\n";
    return kParseError;
  }

  std::vector<Score> scores;
  scores.reserve(records->size());
  try {
    for (const auto& r : *records) {
      const auto fv = encode(r, model.schema);
      scores.push_back({model.score(fv.x), fv.y, fv.category});
    }
  } catch (const SchemaMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const NonFiniteState& e) {
    err << "error: " << e.what() << "\n";
    return kDivergence;
  }

  const double threshold = opt.threshold.value_or(model.default_threshold());
  EvalReport report = evaluate(scores, threshold, opt.name.value_or(model.methodology()));
  report.schema_checksum = schema_checksum(model.schema);

  try {
    write_file_atomic(opt.out, report_to_json(report));
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }

  const auto& cm = report.confusion;
  out << "model           " << report.model << "\n"
      << "samples         " << cm.total() << "\n"
      << "threshold       " << report.threshold << "\n"
      << "confusion       tp=" << cm.tp << " tn=" << cm.tn << " fp=" << cm.fp << " fn=" << cm.fn
      << "\n"
      << "fp_rate         " << rate_or_na(report.fp_rate()) << "   FP/(FP+TN)\n"
      << "fn_rate         " << rate_or_na(report.fn_rate()) << "   FN/(FN+TP)\n"
      << "accuracy        " << rate_or_na(report.accuracy()) << "\n"
      << "detection_rate  " << rate_or_na(report.detection_rate()) << "   TP/(TP+FN)\n";
  for (const auto& [cat, rc] : report.per_category)
    out << "recall " << pad_right(std::string(to_string(cat)), 9) << rate_or_na(rc.recall())
        << "   (" << rc.flagged << "/" << rc.total << ")\n";
  return kOk;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.reports.empty()) {
    err << "error: compare needs at least one report\n";
    return kParseError;
  }
  std::vector<EvalReport> reports;
  for (const auto& path : opt.reports) {
    try {
      reports.push_back(report_from_json(read_file(path)));
    } catch (const std::ios_base::failure& e) {
      err << "error: " << e.what() << "\n";
      return kIoError;
    } catch (const FormatError& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return kParseError;
    }
  }
  const auto table = compare(reports);
  if (opt.json) {
    out << comparison_to_json(table) << "\n";
  } else if (opt.csv) {
    out << table.render_csv();
  } else {
    out << table.render_text();
  }
  return kOk;
}

int cmd_gradcheck(const GradCheckCliOptions& opt, std::ostream& out, std::ostream& err) {
  GradCheckReport report;
  try {
    report = grad_check(opt.check);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  const bool ok = report.passed();
  out << "gradcheck seed=" << opt.check.seed << " D=" << opt.check.input
      << " H=" << opt.check.hidden << " T=" << opt.check.seq_len
      << " act=" << to_string(opt.check.activation) << " dropout=" << opt.check.dropout << "\n"
      << "coordinates checked   " << report.coordinates << "\n"
      << "instance draws        " << report.attempts << "\n"
      << "max relative error    " << std::scientific << std::setprecision(3)
      << report.max_relative_error << std::defaultfloat << "\n"
      << "worst coordinate      " << report.worst_block << "[" << report.worst_index << "]"
      << "  analytic " << std::setprecision(10) << report.worst_analytic << "  numeric "
      << report.worst_numeric << std::setprecision(6) << "\n"
      << (ok ? "PASS" : "FAIL") << " (threshold 1e-4)\n";
  return ok ? kOk : kGradCheckFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anomaly intrusion-detection lab: LSTM vs linear SVM on KDD99 / NSL-KDD"};
  app.require_subcommand(1);

  const std::map<std::string, InputFormat> formats{{"kdd", InputFormat::kdd},
                                                   {"nsl", InputFormat::nsl}};

  StatsOptions stats;
  auto* s = app.add_subcommand("stats", "Duplicate and class-distribution statistics");
  s->add_option("--input", stats.input, "Dataset file")->required();
  s->add_option("--format", stats.format, "Input layout")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  s->add_flag("--json", stats.json, "Emit JSON instead of tables");

  TrainOptions tr;
  int epochs = 0;
  std::uint64_t seed = 0;
  auto* t = app.add_subcommand("train", "Fit a model and write it with its schema");
  t->add_option("--model", tr.model, "Model kind")->check(CLI::IsMember({"lstm", "svm"}));
  t->add_option("--train", tr.train, "Training file")->required();
  t->add_option("--out", tr.out, "Output model path")->required();
  t->add_option("--format", tr.format, "Input layout")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  auto* epochs_opt = t->add_option("--epochs", epochs, "Epochs (lstm 20, svm 10)");
  auto* seed_opt = t->add_option("--seed", seed, "Random seed");
  t->add_option("--batch", tr.lstm.batch_size, "Minibatch size")->capture_default_str();
  t->add_option("--hidden", tr.net.hidden, "LSTM hidden units")->capture_default_str();
  std::string train_act = "relu";
  t->add_option("--act", train_act, "Cell activation")
      ->check(CLI::IsMember({"tanh", "relu"}))->capture_default_str();
  t->add_option("--dropout", tr.net.dropout, "Dropout rate on the final hidden state")
      ->capture_default_str();
  t->add_option("--lr", tr.lstm.learning_rate, "RMSprop learning rate")->capture_default_str();
  t->add_option("--rho", tr.lstm.rho, "RMSprop decay of the squared-gradient average")
      ->capture_default_str();
  t->add_option("--decay", tr.lstm.decay, "Inverse-time learning-rate decay")
      ->capture_default_str();
  t->add_option("--epsilon", tr.lstm.epsilon, "RMSprop epsilon")->capture_default_str();
  t->add_option("--clip", tr.lstm.clip_norm, "Global gradient-norm clip (0 = off)")
      ->capture_default_str();
  t->add_option("--val", tr.lstm.validation_fraction, "Validation fraction")
      ->capture_default_str();
  t->add_option("--patience", tr.lstm.early_stopping_patience,
                "Early-stopping patience in epochs (0 = off)");
  t->add_option("--lambda", tr.svm.lambda, "SVM regularization")->capture_default_str();
  std::string timestamp;
  auto* ts_opt = t->add_option("--timestamp", timestamp, "Fixed creation timestamp");

  EvalOptions ev;
  double threshold = 0.0;
  std::string name;
  auto* e = app.add_subcommand("eval", "Score a test file and write a report");
  e->add_option("--model", ev.model, "Model file")->required();
  e->add_option("--test", ev.test, "Test file")->required();
  e->add_option("--out", ev.out, "Report path")->required();
  e->add_option("--format", ev.format, "Input layout")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  auto* thr_opt = e->add_option("--threshold", threshold,
                                "Decision threshold (lstm 0.5 on p, svm 0 on margin)");
  auto* name_opt = e->add_option("--name", name, "Methodology label in reports");

  CompareOptions cmp;
  auto* c = app.add_subcommand("compare", "Print a comparison table of reports");
  c->add_option("reports", cmp.reports, "Report files")->required();
  c->add_flag("--csv", cmp.csv, "CSV output");
  c->add_flag("--json", cmp.json, "JSON output");

  GradCheckCliOptions gc;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference check of the LSTM backward pass");
  g->add_option("--seed", gc.check.seed, "Random seed")->capture_default_str();
  g->add_option("--input-dim", gc.check.input, "Input size D")->capture_default_str();
  g->add_option("--hidden", gc.check.hidden, "Hidden size H")->capture_default_str();
  g->add_option("--seq-len", gc.check.seq_len, "Sequence length T")->capture_default_str();
  std::string check_act = "tanh";
  g->add_option("--act", check_act, "Cell activation")
      ->check(CLI::IsMember({"tanh", "relu"}))->capture_default_str();
  g->add_option("--dropout", gc.check.dropout, "Dropout rate of the checked mask")->capture_default_str();
  g->add_flag("--corrupt-backward", gc.check.corrupt_backward)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex, out, err);
    return rc == 0 ? kOk : kParseError;
  }

  try {
    if (*s) return cmd_stats(stats, out, err);
    if (*t) {
      if (*epochs_opt) tr.epochs = epochs;
      if (*seed_opt) tr.seed = seed;
      if (*ts_opt) tr.timestamp = timestamp;
      tr.net.activation = *activation_from_string(train_act);
      return cmd_train(tr, out, err);
    }
    if (*e) {
      if (*thr_opt) ev.threshold = threshold;
      if (*name_opt) ev.name = name;
      return cmd_eval(ev, out, err);
    }
    if (*c) return cmd_compare(cmp, out, err);
    if (*g) {
      gc.check.activation = *activation_from_string(check_act);
      return cmd_gradcheck(gc, out, err);
    }
  } catch (const std::ios_base::failure& ex) {
    err << "error: " << ex.what() << "\n";
    return kIoError;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kParseError;
  }
  return kParseError;
}

}  // namespace aidl::cli
