#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

enum class MissingPolicy { drop_row, partial_row };

inline std::string_view to_string(MissingPolicy p) {
  return p == MissingPolicy::drop_row ? "drop_row" : "partial_row";
}

struct ColumnLabel {
  std::string source_header;
  std::string item_label;

  friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
};

// How a table maps onto items. An empty `column_labels` list means every
// header becomes a column labelled by its own name.
struct SchemaConfig {
  std::string name = "generic";
  std::vector<ColumnLabel> column_labels;
  MissingPolicy missing_policy = MissingPolicy::drop_row;
  std::vector<std::string> missing_markers = {"", "NA", "?"};
  char separator = ',';

  void validate() const {
    std::unordered_set<std::string> labels, headers;
    for (const ColumnLabel& c : column_labels) {
      if (c.item_label.empty()) {
        throw Error(ErrorKind::invalid_argument, "empty item label for header " + c.source_header);
      }
      if (!labels.insert(c.item_label).second) {
        throw Error(ErrorKind::invalid_argument, "duplicate item label " + c.item_label);
      }
      if (!headers.insert(c.source_header).second) {
        throw Error(ErrorKind::invalid_argument, "header mapped twice: " + c.source_header);
      }
    }
  }

  bool is_missing(std::string_view cell) const {
    return std::find(missing_markers.begin(), missing_markers.end(), cell) != missing_markers.end();
  }

  // Item label for a header, or the header itself under the identity schema.
  std::string label_for(std::string_view header) const {
    for (const ColumnLabel& c : column_labels) {
      if (c.source_header == header) return c.item_label;
    }
    return std::string(header);
  }

  static SchemaConfig generic() { return {}; }

  // h11 h21 h13 h14 h22 h23 -> item1..item6
  static SchemaConfig cicy5() {
    SchemaConfig s;
    s.name = "cicy5";
    const char* headers[] = {"h11", "h21", "h13", "h14", "h22", "h23"};
    for (std::size_t i = 0; i < std::size(headers); ++i) {
      s.column_labels.push_back({headers[i], "item" + std::to_string(i + 1)});
    }
    return s;
  }

  // h11 h12 h13 h14 h15 h22 h23 h24 h33 -> item1..item9
  static SchemaConfig cicy6() {
    SchemaConfig s;
    s.name = "cicy6";
    const char* headers[] = {"h11", "h12", "h13", "h14", "h15", "h22", "h23", "h24", "h33"};
    for (std::size_t i = 0; i < std::size(headers); ++i) {
      s.column_labels.push_back({headers[i], "item" + std::to_string(i + 1)});
    }
    return s;
  }
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace detail

// Schema document, one directive per line, '#' starts a comment:
//
//   name = cicy5
//   column = h11 -> item1
//   missing_policy = drop_row | partial_row
//   missing_markers = ,NA,?       (comma-separated; empty entries allowed)
//   separator = ;                 (single character, or "tab")
inline SchemaConfig parse_schema(std::istream& in) {
  SchemaConfig s;
  s.name = "custom";
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    if (detail::blank(text)) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::data, "schema line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view raw = text.substr(eq + 1);
    const std::string_view value = trim(raw);
    const auto fail = [&](const std::string& why) {
      return Error(ErrorKind::data, "schema line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "name") {
      s.name = std::string(value);
    } else if (key == "column") {
      const auto arrow = value.find("->");
      if (arrow == std::string_view::npos) throw fail("column needs 'header -> label'");
      s.column_labels.push_back({std::string(trim(value.substr(0, arrow))),
                                 std::string(trim(value.substr(arrow + 2)))});
    } else if (key == "missing_policy") {
      if (value == "drop_row") {
        s.missing_policy = MissingPolicy::drop_row;
      } else if (value == "partial_row") {
        s.missing_policy = MissingPolicy::partial_row;
      } else {
        throw fail("unknown missing_policy '" + std::string(value) + "'");
      }
    } else if (key == "missing_markers") {
      s.missing_markers.clear();
      for (std::string_view m : detail::split(value, ',')) s.missing_markers.emplace_back(trim(m));
    } else if (key == "separator") {
      if (value == "tab") {
        s.separator = '\t';
      } else if (value.size() == 1) {
        s.separator = value.front();
      } else {
        throw fail("separator must be one character or 'tab'");
      }
    } else {
      throw fail("unknown key '" + std::string(key) + "'");
    }
  }
  s.validate();
  return s;
}

inline SchemaConfig load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open schema file " + path);
  return parse_schema(in);
}

// Built-in name (cicy5, cicy6, generic) or a schema file path.
inline SchemaConfig resolve_schema(const std::string& id) {
  if (id == "cicy5") return SchemaConfig::cicy5();
  if (id == "cicy6") return SchemaConfig::cicy6();
  if (id == "generic") return SchemaConfig::generic();
  return load_schema(id);
}

struct IngestResult {
  TransactionDatabase db;
  std::size_t source_rows = 0;
  std::size_t dropped_rows = 0;
};

inline IngestResult read_csv(std::istream& in, const SchemaConfig& schema) {
  schema.validate();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::blank(line)) break;
  }
  if (detail::blank(line)) throw Error(ErrorKind::data, "missing header row");

  std::vector<std::string> headers;
  for (std::string_view h : detail::split(line, schema.separator)) {
    headers.emplace_back(detail::unquote(h));
  }

  // (position in row, label) for every mapped column, in schema order.
  std::vector<std::pair<std::size_t, std::string>> mapped;
  if (schema.column_labels.empty()) {
    for (std::size_t i = 0; i < headers.size(); ++i) mapped.emplace_back(i, headers[i]);
  } else {
    for (const ColumnLabel& c : schema.column_labels) {
      auto it = std::find(headers.begin(), headers.end(), c.source_header);
      if (it == headers.end()) {
        throw Error(ErrorKind::data, "schema references unknown header '" + c.source_header + "'");
      }
      mapped.emplace_back(static_cast<std::size_t>(it - headers.begin()), c.item_label);
    }
  }

  DatabaseBuilder builder;
  std::vector<DatabaseBuilder::ColumnIndex> column_ids;
  for (const auto& [pos, label] : mapped) column_ids.push_back(builder.column(label));

  IngestResult result{TransactionDatabase{}, 0, 0};
  std::vector<std::pair<DatabaseBuilder::ColumnIndex, Value>> cells;
  Tid next_tid = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    ++result.source_rows;
    const auto fields = detail::split(line, schema.separator);
    cells.clear();
    bool any_missing = false;
    for (std::size_t m = 0; m < mapped.size(); ++m) {
      const std::size_t pos = mapped[m].first;
      const std::string_view cell = pos < fields.size() ? trim(fields[pos]) : std::string_view{};
      if (schema.is_missing(cell)) {
        any_missing = true;
        continue;
      }
      Value v = 0;
      if (!parse_integer(cell, v)) {
        throw Error(ErrorKind::data, "unparseable cell '" + std::string(cell) + "' at line " +
                                         std::to_string(lineno) + ", column " + headers[pos]);
      }
      cells.emplace_back(column_ids[m], v);
    }
    const bool drop = cells.empty() ||
                      (any_missing && schema.missing_policy == MissingPolicy::drop_row);
    if (drop) {
      ++result.dropped_rows;
      continue;
    }
    builder.add_row(next_tid++, cells);
  }
  if (builder.rows() == 0) throw Error(ErrorKind::data, "no surviving rows");
  result.db = builder.build();
  return result;
}

inline IngestResult load_csv_with_stats(const std::string& path, const SchemaConfig& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open input file " + path);
  return read_csv(in, schema);
}

inline TransactionDatabase load_csv(const std::string& path, const SchemaConfig& schema) {
  return load_csv_with_stats(path, schema).db;
}

// One line per transaction: tid followed by its rendered items.
inline void write_transactions(std::ostream& os, const TransactionDatabase& db) {
  const ItemCatalog& catalog = db.catalog();
  for (const Transaction& t : db.transactions()) {
    os << t.tid;
    for (ItemId id : t.items) os << ',' << catalog.render(id);
    os << '\n';
  }
}

inline void export_transactions(const TransactionDatabase& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  write_transactions(out, db);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

// Inverse of write_transactions.
inline TransactionDatabase read_transactions(std::istream& in) {
  DatabaseBuilder builder;
  std::vector<std::pair<DatabaseBuilder::ColumnIndex, Value>> cells;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    const auto fields = detail::split(trim(line), ',');
    const auto fail = [&](const std::string& why) {
      return Error(ErrorKind::data, "transaction line " + std::to_string(lineno) + ": " + why);
    };
    Tid tid = 0;
    if (!parse_integer(trim(fields[0]), tid)) throw fail("bad tid");
    cells.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string_view token = trim(fields[i]);
      const auto eq = token.rfind('=');
      Value v = 0;
      if (eq == std::string_view::npos || eq == 0 || !parse_integer(token.substr(eq + 1), v)) {
        throw fail("bad item '" + std::string(token) + "'");
      }
      cells.emplace_back(builder.column(token.substr(0, eq)), v);
    }
    builder.add_row(tid, cells);
  }
  return builder.build();
}

inline TransactionDatabase load_transactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return read_transactions(in);
}

}  // namespace arminer
