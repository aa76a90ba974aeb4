#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/miner.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

struct Metrics {
  double support = 0.0;
  double coverage = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
  double conviction = 0.0;  // +inf when the rule is never violated
  double leverage = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

namespace detail {

using u128 = unsigned __int128;
using i128 = __int128;

inline double ratio(u128 num, u128 den) {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace detail

// Metric block from raw counts. Every ratio is formed from exact integer
// products, so leverage near zero does not suffer cancellation.
inline Metrics compute_metrics(std::size_t lhs_count, std::size_t rhs_count,
                               std::size_t joint_count, std::size_t total) {
  using detail::u128;
  using detail::i128;
  if (total == 0) throw Error(ErrorKind::invalid_argument, "total must be positive");
  if (lhs_count == 0) throw Error(ErrorKind::invalid_argument, "lhs_count must be positive");
  if (rhs_count == 0) throw Error(ErrorKind::invalid_argument, "rhs_count must be positive");
  if (joint_count > lhs_count) {
    throw Error(ErrorKind::invalid_argument, "joint_count <= lhs_count violated");
  }
  if (joint_count > rhs_count) {
    throw Error(ErrorKind::invalid_argument, "joint_count <= rhs_count violated");
  }
  if (lhs_count > total) throw Error(ErrorKind::invalid_argument, "lhs_count <= total violated");
  if (rhs_count > total) throw Error(ErrorKind::invalid_argument, "rhs_count <= total violated");

  const u128 l = lhs_count, r = rhs_count, j = joint_count, t = total;
  Metrics m;
  m.support = detail::ratio(j, t);
  m.coverage = detail::ratio(l, t);
  m.confidence = detail::ratio(j, l);
  m.lift = detail::ratio(j * t, l * r);
  if (j == l) {
    m.conviction = r == t ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    m.conviction = detail::ratio((t - r) * l, t * (l - j));
  }
  const i128 lev_num = static_cast<i128>(j * t) - static_cast<i128>(l * r);
  const long double lev = static_cast<long double>(lev_num) / static_cast<long double>(t * t);
  m.leverage = static_cast<double>(lev);
  return m;
}

struct AssociationRule {
  Itemset lhs;  // may be empty; lhs.count = N(X), total for the empty set
  Itemset rhs;  // non-empty; rhs.count = N(Y)
  std::size_t count = 0;  // N(X u Y)
  Metrics metrics;

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

enum class RuleOrder {
  lhs_size_support,  // |LHS| asc, support desc, items asc
  support,           // support desc, items asc
  confidence,        // confidence desc, support desc, items asc
  lift,              // lift desc, support desc, items asc
};

inline std::string_view to_string(RuleOrder order) {
  switch (order) {
    case RuleOrder::lhs_size_support: return "lhs-size-support";
    case RuleOrder::support: return "support";
    case RuleOrder::confidence: return "confidence";
    case RuleOrder::lift: return "lift";
  }
  return "lhs-size-support";
}

inline RuleOrder parse_rule_order(std::string_view name) {
  for (RuleOrder o : {RuleOrder::lhs_size_support, RuleOrder::support, RuleOrder::confidence,
                      RuleOrder::lift}) {
    if (name == to_string(o)) return o;
  }
  throw Error(ErrorKind::invalid_argument, "unknown rule ordering '" + std::string(name) + "'");
}

struct RuleConfig {
  double min_confidence = 0.80;
  bool include_empty_lhs = true;
  bool singleton_rhs = false;
  RuleOrder ordering = RuleOrder::lhs_size_support;

  void validate() const {
    if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
      throw Error(ErrorKind::invalid_argument, "min-confidence must lie in (0,1]");
    }
  }
};

// Strict total order on rules for the given policy. Ratios are compared by
// cross-multiplying counts.
inline bool rule_less(const AssociationRule& a, const AssociationRule& b, RuleOrder order) {
  using detail::u128;
  const auto by_items = [&] {
    if (a.lhs.items != b.lhs.items) return a.lhs.items < b.lhs.items;
    return a.rhs.items < b.rhs.items;
  };
  switch (order) {
    case RuleOrder::lhs_size_support:
      if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
      if (a.count != b.count) return a.count > b.count;
      return by_items();
    case RuleOrder::support:
      if (a.count != b.count) return a.count > b.count;
      return by_items();
    case RuleOrder::confidence: {
      const u128 x = u128(a.count) * b.lhs.count, y = u128(b.count) * a.lhs.count;
      if (x != y) return x > y;
      if (a.count != b.count) return a.count > b.count;
      return by_items();
    }
    case RuleOrder::lift: {
      // lift = j t / (l r); t is shared.
      const u128 x = u128(a.count) * b.lhs.count * b.rhs.count;
      const u128 y = u128(b.count) * a.lhs.count * a.rhs.count;
      if (x != y) return x > y;
      if (a.count != b.count) return a.count > b.count;
      return by_items();
    }
  }
  return by_items();
}

inline void sort_rules(std::vector<AssociationRule>& rules, RuleOrder order) {
  std::sort(rules.begin(), rules.end(),
            [order](const AssociationRule& a, const AssociationRule& b) { return rule_less(a, b, order); });
}

struct ItemsHash {
  std::size_t operator()(const std::vector<ItemId>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (ItemId id : v) {
      h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Emits X => Y for every frequent Z = X u Y with Y non-empty and
// confidence meeting the threshold.
inline std::vector<AssociationRule> generate_rules(const FrequentSets& frequent,
                                                   const RuleConfig& config) {
  config.validate();
  if (frequent.total == 0) {
    throw Error(ErrorKind::invalid_argument, "frequent sets carry a zero transaction total");
  }

  std::unordered_map<std::vector<ItemId>, std::size_t, ItemsHash> counts;
  for (const auto& level : frequent.levels) {
    for (const Itemset& s : level) {
      if (s.count > frequent.total || s.count == 0) {
        throw Error(ErrorKind::invalid_argument,
                    "itemset count " + std::to_string(s.count) + " inconsistent with total " +
                        std::to_string(frequent.total));
      }
      counts.emplace(s.items, s.count);
    }
  }
  const auto lookup = [&](const std::vector<ItemId>& items) -> std::size_t {
    if (items.empty()) return frequent.total;
    auto it = counts.find(items);
    if (it == counts.end()) {
      throw Error(ErrorKind::invalid_argument, "frequent sets are not downward closed");
    }
    return it->second;
  };

  std::vector<AssociationRule> rules;
  std::vector<ItemId> lhs, rhs;
  for (const auto& level : frequent.levels) {
    for (const Itemset& z : level) {
      const std::size_t k = z.size();
      if (k > 62) throw Error(ErrorKind::invalid_argument, "itemset too large for rule enumeration");
      const std::uint64_t full = (std::uint64_t{1} << k) - 1;

      const auto emit = [&](std::uint64_t rhs_mask) {
        if (rhs_mask == full && !config.include_empty_lhs) return;
        lhs.clear();
        rhs.clear();
        for (std::size_t p = 0; p < k; ++p) {
          ((rhs_mask >> p) & 1U ? rhs : lhs).push_back(z.items[p]);
        }
        const std::size_t lhs_count = lookup(lhs);
        if (!meets_threshold(z.count, lhs_count, config.min_confidence)) return;
        const std::size_t rhs_count = lookup(rhs);
        AssociationRule rule;
        rule.lhs = {lhs, lhs_count};
        rule.rhs = {rhs, rhs_count};
        rule.count = z.count;
        rule.metrics = compute_metrics(lhs_count, rhs_count, z.count, frequent.total);
        rules.push_back(std::move(rule));
      };

      if (config.singleton_rhs) {
        for (std::size_t p = 0; p < k; ++p) emit(std::uint64_t{1} << p);
      } else {
        for (std::uint64_t mask = 1; mask <= full; ++mask) emit(mask);
      }
    }
  }
  sort_rules(rules, config.ordering);
  return rules;
}

inline std::string render_itemset_braced(const ItemCatalog& catalog, std::span<const ItemId> items) {
  return "{" + render_items(catalog, items, ",") + "}";
}

// Rule CSV: rule,LHS,RHS,support,confidence,coverage,lift,count, optionally
// followed by conviction,leverage. Metrics at full precision.
inline void write_rules_csv(std::ostream& os, std::span<const AssociationRule> rules,
                            const ItemCatalog& catalog, bool extended) {
  os << "rule,LHS,RHS,support,confidence,coverage,lift,count";
  if (extended) os << ",conviction,leverage";
  os << '\n';
  std::size_t n = 0;
  for (const AssociationRule& r : rules) {
    os << ++n << ',' << csv_field(render_itemset_braced(catalog, r.lhs.items)) << ','
       << csv_field(render_itemset_braced(catalog, r.rhs.items)) << ','
       << format_double(r.metrics.support) << ',' << format_double(r.metrics.confidence) << ','
       << format_double(r.metrics.coverage) << ',' << format_double(r.metrics.lift) << ','
       << r.count;
    if (extended) {
      os << ',' << format_double(r.metrics.conviction) << ','
         << format_double(r.metrics.leverage);
    }
    os << '\n';
  }
}

}  // namespace arminer
