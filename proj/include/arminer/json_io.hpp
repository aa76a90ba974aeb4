#pragma once

#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/ingest.hpp"
#include "arminer/predictor.hpp"
#include "arminer/rules.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

inline constexpr std::string_view kRulesFormat = "arminer.rules/1";

// Everything needed to reuse a mined rule set without the source data.
struct RuleSetDocument {
  ItemCatalog catalog;
  std::vector<ColumnLabel> columns;  // source header -> item label
  std::size_t total = 0;
  double min_support = 0.0;
  double min_confidence = 0.0;
  RuleOrder ordering = RuleOrder::lhs_size_support;
  std::vector<AssociationRule> rules;
};

// Splits "item5=4" into ("item5", 4). The last '=' separates the value.
inline std::optional<std::pair<std::string, Value>> parse_item_token(std::string_view token) {
  token = trim(token);
  const auto eq = token.rfind('=');
  if (eq == std::string_view::npos || eq == 0) return std::nullopt;
  Value v = 0;
  if (!parse_integer(trim(token.substr(eq + 1)), v)) return std::nullopt;
  return std::make_pair(std::string(trim(token.substr(0, eq))), v);
}

namespace detail {

inline nlohmann::json metric_value(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

inline double metric_from(const nlohmann::json& j) {
  if (j.is_string()) {
    double x = 0;
    if (!parse_double(j.get<std::string>(), x)) {
      throw Error(ErrorKind::data, "bad metric value " + j.dump());
    }
    return x;
  }
  return j.get<double>();
}

inline nlohmann::json items_json(const ItemCatalog& catalog, const std::vector<ItemId>& items) {
  nlohmann::json arr = nlohmann::json::array();
  for (ItemId id : items) arr.push_back(catalog.render(id));
  return arr;
}

inline std::vector<ItemId> items_from(const ItemCatalog& catalog, const nlohmann::json& arr) {
  std::vector<ItemId> ids;
  for (const auto& tok : arr) {
    const auto parsed = parse_item_token(tok.get<std::string>());
    if (!parsed) throw Error(ErrorKind::data, "bad item token " + tok.dump());
    const auto id = catalog.find(parsed->first, parsed->second);
    if (!id) throw Error(ErrorKind::data, "item " + tok.get<std::string>() + " not in catalog");
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace detail

inline nlohmann::json rule_to_json(const AssociationRule& r, const ItemCatalog& catalog) {
  return {
      {"lhs", detail::items_json(catalog, r.lhs.items)},
      {"rhs", detail::items_json(catalog, r.rhs.items)},
      {"count", r.count},
      {"lhs_count", r.lhs.count},
      {"rhs_count", r.rhs.count},
      {"support", r.metrics.support},
      {"confidence", r.metrics.confidence},
      {"coverage", r.metrics.coverage},
      {"lift", r.metrics.lift},
      {"conviction", detail::metric_value(r.metrics.conviction)},
      {"leverage", r.metrics.leverage},
  };
}

inline nlohmann::json to_json(const RuleSetDocument& doc) {
  nlohmann::json columns = nlohmann::json::array();
  for (const ColumnLabel& c : doc.columns) {
    columns.push_back({{"header", c.source_header}, {"label", c.item_label}});
  }
  nlohmann::json catalog = nlohmann::json::array();
  for (const ItemEntry& e : doc.catalog.entries()) {
    catalog.push_back({{"column", e.column}, {"value", e.value}});
  }
  nlohmann::json rules = nlohmann::json::array();
  for (const AssociationRule& r : doc.rules) rules.push_back(rule_to_json(r, doc.catalog));
  return {
      {"format", kRulesFormat},
      {"total", doc.total},
      {"min_support", doc.min_support},
      {"min_confidence", doc.min_confidence},
      {"ordering", to_string(doc.ordering)},
      {"columns", std::move(columns)},
      {"catalog", std::move(catalog)},
      {"rules", std::move(rules)},
  };
}

inline RuleSetDocument rules_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != kRulesFormat) {
      throw Error(ErrorKind::data, "not an " + std::string(kRulesFormat) + " document");
    }
    RuleSetDocument doc;
    doc.total = j.at("total").get<std::size_t>();
    doc.min_support = j.at("min_support").get<double>();
    doc.min_confidence = j.at("min_confidence").get<double>();
    doc.ordering = parse_rule_order(j.at("ordering").get<std::string>());
    for (const auto& c : j.at("columns")) {
      doc.columns.push_back({c.at("header").get<std::string>(), c.at("label").get<std::string>()});
    }
    std::vector<ItemEntry> entries;
    for (const auto& e : j.at("catalog")) {
      entries.push_back({e.at("column").get<std::string>(), e.at("value").get<Value>()});
    }
    doc.catalog = ItemCatalog(std::move(entries));
    for (const auto& r : j.at("rules")) {
      AssociationRule rule;
      rule.lhs = {detail::items_from(doc.catalog, r.at("lhs")), r.at("lhs_count").get<std::size_t>()};
      rule.rhs = {detail::items_from(doc.catalog, r.at("rhs")), r.at("rhs_count").get<std::size_t>()};
      rule.count = r.at("count").get<std::size_t>();
      rule.metrics.support = detail::metric_from(r.at("support"));
      rule.metrics.confidence = detail::metric_from(r.at("confidence"));
      rule.metrics.coverage = detail::metric_from(r.at("coverage"));
      rule.metrics.lift = detail::metric_from(r.at("lift"));
      rule.metrics.conviction = detail::metric_from(r.at("conviction"));
      rule.metrics.leverage = detail::metric_from(r.at("leverage"));
      doc.rules.push_back(std::move(rule));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::data, std::string("malformed rules document: ") + e.what());
  }
}

inline void write_rules_json(std::ostream& os, const RuleSetDocument& doc) {
  os << to_json(doc).dump(2) << '\n';
}

inline RuleSetDocument read_rules_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::data, std::string("cannot parse rules JSON: ") + e.what());
  }
  return rules_from_json(j);
}

inline nlohmann::json predictions_to_json(const std::vector<Prediction>& predictions,
                                          const ItemCatalog& catalog) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Prediction& p : predictions) {
    arr.push_back({
        {"value", catalog.entry(p.target_item).value},
        {"item", catalog.render(p.target_item)},
        {"confidence", p.confidence},
        {"support", p.support},
        {"rule", rule_to_json(p.witnessing_rule, catalog)},
    });
  }
  return arr;
}

}  // namespace arminer
