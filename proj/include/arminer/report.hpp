#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/rules.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

// A rule as text plus metrics, independent of any catalog.
struct RuleRow {
  std::string lhs;  // "{item5=4}"
  std::string rhs;
  double support = 0.0;
  double confidence = 0.0;
  double coverage = 0.0;
  double lift = 0.0;
  std::size_t count = 0;
  std::optional<double> conviction;
  std::optional<double> leverage;
};

inline std::vector<RuleRow> rule_rows(std::span<const AssociationRule> rules,
                                      const ItemCatalog& catalog) {
  std::vector<RuleRow> rows;
  rows.reserve(rules.size());
  for (const AssociationRule& r : rules) {
    rows.push_back({render_itemset_braced(catalog, r.lhs.items),
                    render_itemset_braced(catalog, r.rhs.items), r.metrics.support,
                    r.metrics.confidence, r.metrics.coverage, r.metrics.lift, r.count,
                    r.metrics.conviction, r.metrics.leverage});
  }
  return rows;
}

namespace detail {

// RFC 4180 style field splitting for a single line.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace detail

// Reads the rule CSV written by write_rules_csv (either layout).
inline std::vector<RuleRow> read_rules_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::data, "empty rule CSV");
  const auto header = detail::split_csv_line(line);
  const auto col = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const char* required[] = {"LHS", "RHS", "support", "confidence", "coverage", "lift", "count"};
  std::size_t idx[7];
  for (std::size_t i = 0; i < 7; ++i) {
    const auto c = col(required[i]);
    if (!c) throw Error(ErrorKind::data, std::string("rule CSV lacks column ") + required[i]);
    idx[i] = *c;
  }
  const auto conviction_col = col("conviction");
  const auto leverage_col = col("leverage");

  std::vector<RuleRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    const auto fail = [&] {
      return Error(ErrorKind::data, "rule CSV line " + std::to_string(lineno) + " is malformed");
    };
    const auto number = [&](std::size_t i) {
      double x = 0;
      if (i >= f.size() || !parse_double(trim(f[i]), x)) throw fail();
      return x;
    };
    RuleRow r;
    if (idx[1] >= f.size() || idx[0] >= f.size()) throw fail();
    r.lhs = f[idx[0]];
    r.rhs = f[idx[1]];
    r.support = number(idx[2]);
    r.confidence = number(idx[3]);
    r.coverage = number(idx[4]);
    r.lift = number(idx[5]);
    if (idx[6] >= f.size() || !parse_integer(trim(f[idx[6]]), r.count)) throw fail();
    if (conviction_col) r.conviction = number(*conviction_col);
    if (leverage_col) r.leverage = number(*leverage_col);
    rows.push_back(std::move(r));
  }
  return rows;
}

struct ReportOptions {
  std::size_t top = 10;
  int precision = 4;
  bool paper_layout = false;  // exactly rule,LHS,RHS,support,confidence,coverage,lift,count
  bool csv = false;           // CSV instead of an aligned text table
};

inline void render_report(std::ostream& os, std::span<const RuleRow> rows,
                          const ReportOptions& opt) {
  const std::size_t n = std::min(opt.top, rows.size());
  const bool extended = !opt.paper_layout && n > 0 &&
                        std::all_of(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n),
                                    [](const RuleRow& r) { return r.conviction && r.leverage; });

  std::vector<std::string> header = {"rule", "LHS", "RHS", "support", "confidence",
                                     "coverage", "lift", "count"};
  if (extended) {
    header.push_back("conviction");
    header.push_back("leverage");
  }
  std::vector<std::vector<std::string>> table;
  for (std::size_t i = 0; i < n; ++i) {
    const RuleRow& r = rows[i];
    std::vector<std::string> cells = {std::to_string(i + 1),
                                      r.lhs,
                                      r.rhs,
                                      format_fixed(r.support, opt.precision),
                                      format_fixed(r.confidence, opt.precision),
                                      format_fixed(r.coverage, opt.precision),
                                      format_fixed(r.lift, opt.precision),
                                      std::to_string(r.count)};
    if (extended) {
      cells.push_back(format_fixed(*r.conviction, opt.precision));
      cells.push_back(format_fixed(*r.leverage, opt.precision));
    }
    table.push_back(std::move(cells));
  }

  if (opt.csv) {
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : table) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(row[c]);
      os << '\n';
    }
    return;
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  // LHS and RHS left-aligned, numbers right-aligned.
  const auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c == 1 || c == 2) {
        os << row[c] << (c + 1 < row.size() ? pad : "");
      } else {
        os << pad << row[c];
      }
    }
    os << '\n';
  };
  emit(header);
  for (const auto& row : table) emit(row);
}

}  // namespace arminer
