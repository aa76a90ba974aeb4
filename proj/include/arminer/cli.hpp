#pragma once

// Command-line front end: ingest -> mine -> rules -> report/predict.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/ingest.hpp"
#include "arminer/json_io.hpp"
#include "arminer/miner.hpp"
#include "arminer/predictor.hpp"
#include "arminer/report.hpp"
#include "arminer/rules.hpp"
#include "arminer/version.hpp"

namespace arminer::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kBadArguments = 2 };

struct MineOptions {
  std::string input;
  std::string input_format = "csv";  // csv | transactions
  std::string schema = "generic";
  std::string separator;             // overrides the schema separator when set
  std::string missing_policy;        // overrides the schema policy when set
  double min_support = 0.10;
  double min_confidence = 0.80;
  std::size_t max_len = 0;  // 0 = unlimited
  unsigned workers = 1;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json (json also writes the CSV)
  std::string ordering = "lhs-size-support";
  bool singleton_rhs = false;
  bool no_empty_lhs = false;
  bool extended = false;
  bool export_transactions = false;
};

inline nlohmann::json manifest_settings(const MineOptions& o) {
  return {
      {"input", o.input},
      {"input_format", o.input_format},
      {"schema", o.schema},
      {"separator", o.separator},
      {"missing_policy", o.missing_policy},
      {"min_support", o.min_support},
      {"min_confidence", o.min_confidence},
      {"max_len", o.max_len == 0 ? nlohmann::json(nullptr) : nlohmann::json(o.max_len)},
      {"workers", o.workers},
      {"out_dir", o.out_dir},
      {"format", o.format},
      {"ordering", o.ordering},
      {"singleton_rhs", o.singleton_rhs},
      {"include_empty_lhs", !o.no_empty_lhs},
      {"extended", o.extended},
      {"export_transactions", o.export_transactions},
  };
}

inline MineOptions options_from_manifest(const nlohmann::json& m) {
  const nlohmann::json& s = m.at("settings");
  MineOptions o;
  o.input = s.at("input").get<std::string>();
  o.input_format = s.value("input_format", "csv");
  o.schema = s.value("schema", "generic");
  o.separator = s.value("separator", "");
  o.missing_policy = s.value("missing_policy", "");
  o.min_support = s.at("min_support").get<double>();
  o.min_confidence = s.at("min_confidence").get<double>();
  o.max_len = s.at("max_len").is_null() ? 0 : s.at("max_len").get<std::size_t>();
  o.workers = s.value("workers", 1u);
  o.out_dir = s.value("out_dir", ".");
  o.format = s.value("format", "csv");
  o.ordering = s.value("ordering", "lhs-size-support");
  o.singleton_rhs = s.value("singleton_rhs", false);
  o.no_empty_lhs = !s.value("include_empty_lhs", true);
  o.extended = s.value("extended", false);
  o.export_transactions = s.value("export_transactions", false);
  return o;
}

namespace detail {

inline void validate(const MineOptions& o) {
  if (!(o.min_support > 0.0 && o.min_support <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "min-support must lie in (0,1]");
  }
  if (!(o.min_confidence > 0.0 && o.min_confidence <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "min-confidence must lie in (0,1]");
  }
  if (o.workers == 0) throw Error(ErrorKind::invalid_argument, "workers must be positive");
  if (o.format != "csv" && o.format != "json") {
    throw Error(ErrorKind::invalid_argument, "format must be csv or json");
  }
  if (o.input_format != "csv" && o.input_format != "transactions") {
    throw Error(ErrorKind::invalid_argument, "input-format must be csv or transactions");
  }
  if (o.separator.size() > 1 && o.separator != "tab") {
    throw Error(ErrorKind::invalid_argument, "separator must be one character or 'tab'");
  }
  if (!o.missing_policy.empty() && o.missing_policy != "drop_row" &&
      o.missing_policy != "partial_row") {
    throw Error(ErrorKind::invalid_argument, "missing-policy must be drop_row or partial_row");
  }
  parse_rule_order(o.ordering);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

inline double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

inline int cmd_mine(const MineOptions& o, std::ostream& out) {
  namespace fs = std::filesystem;
  using clock = std::chrono::steady_clock;
  detail::validate(o);

  SchemaConfig schema = resolve_schema(o.schema);
  if (o.separator == "tab") {
    schema.separator = '\t';
  } else if (o.separator.size() == 1) {
    schema.separator = o.separator.front();
  }
  if (o.missing_policy == "drop_row") schema.missing_policy = MissingPolicy::drop_row;
  if (o.missing_policy == "partial_row") schema.missing_policy = MissingPolicy::partial_row;

  auto t0 = clock::now();
  IngestResult ingest;
  if (o.input_format == "transactions") {
    ingest.db = load_transactions(o.input);
    ingest.source_rows = ingest.db.total();
  } else {
    ingest = load_csv_with_stats(o.input, schema);
  }
  const TransactionDatabase& db = ingest.db;
  const double ingest_ms = detail::ms_since(t0);

  MiningConfig mining;
  mining.min_support = o.min_support;
  if (o.max_len) mining.max_len = o.max_len;
  mining.workers = o.workers;
  t0 = clock::now();
  const FrequentSets frequent = mine_frequent(db, mining);
  const double mine_ms = detail::ms_since(t0);

  RuleConfig rules_cfg;
  rules_cfg.min_confidence = o.min_confidence;
  rules_cfg.include_empty_lhs = !o.no_empty_lhs;
  rules_cfg.singleton_rhs = o.singleton_rhs;
  rules_cfg.ordering = parse_rule_order(o.ordering);
  t0 = clock::now();
  const std::vector<AssociationRule> rules = generate_rules(frequent, rules_cfg);
  const double rules_ms = detail::ms_since(t0);

  t0 = clock::now();
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + o.out_dir);
  const fs::path dir(o.out_dir);
  nlohmann::json outputs;
  {
    auto f = detail::open_output(dir / "itemsets.csv");
    write_frequent(f, frequent, db.catalog());
    outputs["itemsets"] = (dir / "itemsets.csv").string();
  }
  {
    auto f = detail::open_output(dir / "rules.csv");
    write_rules_csv(f, rules, db.catalog(), o.extended);
    outputs["rules_csv"] = (dir / "rules.csv").string();
  }
  if (o.format == "json") {
    RuleSetDocument doc;
    doc.catalog = db.catalog();
    if (o.input_format == "csv") {
      if (schema.column_labels.empty()) {
        for (const std::string& c : db.catalog().columns()) doc.columns.push_back({c, c});
      } else {
        doc.columns = schema.column_labels;
      }
    }
    doc.total = db.total();
    doc.min_support = o.min_support;
    doc.min_confidence = o.min_confidence;
    doc.ordering = rules_cfg.ordering;
    doc.rules = rules;
    auto f = detail::open_output(dir / "rules.json");
    write_rules_json(f, doc);
    outputs["rules_json"] = (dir / "rules.json").string();
  }
  if (o.export_transactions) {
    auto f = detail::open_output(dir / "transactions.csv");
    write_transactions(f, db);
    outputs["transactions"] = (dir / "transactions.csv").string();
  }
  const double write_ms = detail::ms_since(t0);

  nlohmann::json manifest = {
      {"engine", "arminer"},
      {"engine_version", kVersion},
      {"settings", manifest_settings(o)},
      {"outputs", outputs},
      {"database", {{"total", db.total()},
                    {"items", db.num_items()},
                    {"source_rows", ingest.source_rows},
                    {"dropped_rows", ingest.dropped_rows}}},
      {"results", {{"frequent_itemsets", frequent.size()}, {"rules", rules.size()}}},
      {"wall_time_ms", {{"ingest", ingest_ms}, {"mine", mine_ms}, {"rules", rules_ms}, {"write", write_ms}}},
  };
  {
    auto f = detail::open_output(dir / "manifest.json");
    f << manifest.dump(2) << '\n';
  }

  out << "transactions: " << db.total() << " (dropped " << ingest.dropped_rows << ")\n"
      << "items: " << db.num_items() << "\n"
      << "frequent itemsets: " << frequent.size() << "\n"
      << "rules: " << rules.size() << "\n";
  return kOk;
}

struct PredictOptions {
  std::string rules;
  std::vector<std::string> known;
  std::string target;
  std::string format = "table";  // table | json
  int precision = 4;
};

inline int cmd_predict(const PredictOptions& o, std::ostream& out, std::ostream& err) {
  if (o.format != "table" && o.format != "json") {
    throw Error(ErrorKind::invalid_argument, "format must be table or json");
  }
  std::ifstream in(o.rules);
  if (!in) throw Error(ErrorKind::io, "cannot open rules file " + o.rules);
  const RuleSetDocument doc = read_rules_json(in);

  // Accept either the item label (item1) or the source header (h11).
  const auto resolve_column = [&](const std::string& name) -> std::string {
    if (doc.catalog.has_column(name)) return name;
    for (const ColumnLabel& c : doc.columns) {
      if (c.source_header == name) return c.item_label;
      if (c.item_label == name) return name;
    }
    throw Error(ErrorKind::invalid_argument, "unknown column '" + name + "'");
  };

  const std::string target = resolve_column(o.target);
  std::vector<ItemId> known;
  for (const std::string& arg : o.known) {
    for (std::string_view token : ::arminer::detail::split(arg, ',')) {
      if (trim(token).empty()) continue;
      const auto parsed = parse_item_token(token);
      if (!parsed) {
        throw Error(ErrorKind::invalid_argument, "malformed known item '" + std::string(token) +
                                                     "', expected column=value");
      }
      const std::string column = resolve_column(parsed->first);
      if (column == target) {
        throw Error(ErrorKind::invalid_argument, "target column '" + o.target + "' is already known");
      }
      // A value never seen while mining cannot appear in any rule.
      if (const auto id = doc.catalog.find(column, parsed->second)) known.push_back(*id);
    }
  }

  const auto predictions = predict(doc.catalog, known, doc.rules, target);
  if (predictions.empty()) err << "no rule applies to the known items\n";

  if (o.format == "json") {
    out << predictions_to_json(predictions, doc.catalog).dump(2) << '\n';
    return kOk;
  }
  for (const Prediction& p : predictions) {
    out << doc.catalog.render(p.target_item) << " @ " << format_fixed(p.confidence, o.precision)
        << "  support " << format_fixed(p.support, o.precision) << "  rule "
        << render_itemset_braced(doc.catalog, p.witnessing_rule.lhs.items) << " => "
        << render_itemset_braced(doc.catalog, p.witnessing_rule.rhs.items) << '\n';
  }
  return kOk;
}

struct ReportCliOptions {
  std::string input;
  std::size_t top = 10;
  int precision = 4;
  bool paper_layout = false;
  std::string format = "table";  // table | csv
};

inline int cmd_report(const ReportCliOptions& o, std::ostream& out) {
  if (o.format != "table" && o.format != "csv") {
    throw Error(ErrorKind::invalid_argument, "format must be table or csv");
  }
  if (o.precision < 0 || o.precision > 17) {
    throw Error(ErrorKind::invalid_argument, "precision must lie in [0,17]");
  }
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorKind::io, "cannot open " + o.input);
  std::vector<RuleRow> rows;
  if (in.peek() == '{') {
    const RuleSetDocument doc = read_rules_json(in);
    rows = rule_rows(doc.rules, doc.catalog);
  } else {
    rows = read_rules_csv(in);
  }
  ReportOptions ro;
  ro.top = o.top;
  ro.precision = o.precision;
  ro.paper_layout = o.paper_layout;
  ro.csv = o.format == "csv";
  render_report(out, rows, ro);
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Apriori association-rule miner for discrete-valued tables"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  MineOptions mine;
  std::string manifest_path;
  auto* mine_cmd = app.add_subcommand("mine", "Mine frequent itemsets and strong rules");
  mine_cmd->add_option("--input", mine.input, "Input table (CSV) or transaction export");
  mine_cmd->add_option("--input-format", mine.input_format, "csv or transactions");
  mine_cmd->add_option("--schema", mine.schema, "cicy5, cicy6, generic, or a schema file");
  mine_cmd->add_option("--separator", mine.separator, "Field separator override (char or 'tab')");
  mine_cmd->add_option("--missing-policy", mine.missing_policy, "drop_row or partial_row");
  mine_cmd->add_option("--min-support", mine.min_support, "Minimum support fraction");
  mine_cmd->add_option("--min-confidence", mine.min_confidence, "Minimum confidence");
  mine_cmd->add_option("--max-len", mine.max_len, "Maximum itemset size (0 = unlimited)");
  mine_cmd->add_option("--workers", mine.workers, "Support-counting threads");
  mine_cmd->add_option("--out-dir", mine.out_dir, "Output directory");
  mine_cmd->add_option("--format", mine.format, "csv, or json to also write rules.json");
  mine_cmd->add_option("--ordering", mine.ordering,
                       "lhs-size-support, support, confidence or lift");
  mine_cmd->add_flag("--singleton-rhs", mine.singleton_rhs, "Only rules with one RHS item");
  mine_cmd->add_flag("--no-empty-lhs", mine.no_empty_lhs, "Suppress rules with an empty LHS");
  mine_cmd->add_flag("--extended", mine.extended, "Add conviction and leverage to rules.csv");
  mine_cmd->add_flag("--export-transactions", mine.export_transactions,
                     "Also write the encoded transactions");
  mine_cmd->add_option("--manifest", manifest_path, "Re-run the settings of a prior manifest");

  PredictOptions pred;
  auto* pred_cmd = app.add_subcommand("predict", "Rank values for a missing column");
  pred_cmd->add_option("--rules", pred.rules, "rules.json from a prior mine run")->required();
  pred_cmd->add_option("--known", pred.known, "Known item, e.g. item5=5 (repeatable)");
  pred_cmd->add_option("--target", pred.target, "Target column (label or header)")->required();
  pred_cmd->add_option("--format", pred.format, "table or json");
  pred_cmd->add_option("--precision", pred.precision, "Decimal places");

  ReportCliOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Render the top rules of a rule CSV/JSON");
  rep_cmd->add_option("--input", rep.input, "rules.csv or rules.json")->required();
  rep_cmd->add_option("--top", rep.top, "Number of rules");
  rep_cmd->add_option("--precision", rep.precision, "Decimal places");
  rep_cmd->add_flag("--paper-layout", rep.paper_layout,
                    "Only rule,LHS,RHS,support,confidence,coverage,lift,count");
  rep_cmd->add_option("--format", rep.format, "table or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (*mine_cmd) {
      if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw Error(ErrorKind::io, "cannot open manifest " + manifest_path);
        nlohmann::json m;
        try {
          in >> m;
          MineOptions from = options_from_manifest(m);
          if (mine_cmd->count("--out-dir")) from.out_dir = mine.out_dir;
          if (mine_cmd->count("--workers")) from.workers = mine.workers;
          mine = from;
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorKind::io, std::string("malformed manifest: ") + e.what());
        }
      } else if (mine.input.empty()) {
        throw Error(ErrorKind::invalid_argument, "--input is required");
      }
      return cmd_mine(mine, out);
    }
    if (*pred_cmd) return cmd_predict(pred, out, err);
    if (*rep_cmd) return cmd_report(rep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::invalid_argument ? kBadArguments : kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kOk;
}

}  // namespace arminer::cli
