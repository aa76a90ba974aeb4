#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arminer/error.hpp"
#include "arminer/rules.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

struct Prediction {
  ItemId target_item = 0;
  double confidence = 0.0;
  double support = 0.0;
  AssociationRule witnessing_rule;
};

// Ranks candidate values for `target_column` given the items known for a
// partial transaction. For each value the strongest applicable rule
// (LHS within the known items, RHS exactly {target_column=value}) is kept.
// Results are ordered by confidence, then support, both descending, then by
// value ascending. Advisory only; nothing is written back.
inline std::vector<Prediction> predict(const ItemCatalog& catalog,
                                       std::span<const ItemId> known_items,
                                       std::span<const AssociationRule> ruleset,
                                       std::string_view target_column) {
  std::vector<ItemId> known(known_items.begin(), known_items.end());
  std::sort(known.begin(), known.end());
  known.erase(std::unique(known.begin(), known.end()), known.end());
  for (ItemId id : known) {
    if (catalog.column_of(id) == target_column) {
      throw Error(ErrorKind::invalid_argument,
                  "target column '" + std::string(target_column) + "' is already known (" +
                      catalog.render(id) + ")");
    }
  }

  const auto stronger = [](const AssociationRule& a, const AssociationRule& b) {
    if (a.metrics.confidence != b.metrics.confidence) return a.metrics.confidence > b.metrics.confidence;
    if (a.count != b.count) return a.count > b.count;
    return a.lhs.items < b.lhs.items;
  };

  std::map<ItemId, const AssociationRule*> best;
  for (const AssociationRule& rule : ruleset) {
    if (rule.rhs.items.size() != 1) continue;
    const ItemId target = rule.rhs.items.front();
    if (catalog.column_of(target) != target_column) continue;
    if (!std::includes(known.begin(), known.end(), rule.lhs.items.begin(), rule.lhs.items.end())) {
      continue;
    }
    auto [it, inserted] = best.emplace(target, &rule);
    if (!inserted && stronger(rule, *it->second)) it->second = &rule;
  }

  std::vector<Prediction> out;
  out.reserve(best.size());
  for (const auto& [item, rule] : best) {
    out.push_back({item, rule->metrics.confidence, rule->metrics.support, *rule});
  }
  std::sort(out.begin(), out.end(), [&](const Prediction& a, const Prediction& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    return catalog.entry(a.target_item).value < catalog.entry(b.target_item).value;
  });
  return out;
}

}  // namespace arminer
