#pragma once

// Exhaustive reference miner used to check the Apriori engine. Counts come
// from horizontal scans only; the vertical bitmaps are never consulted.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "arminer/error.hpp"
#include "arminer/miner.hpp"
#include "arminer/rules.hpp"
#include "arminer/txdb.hpp"

namespace arminer::oracle {

inline constexpr std::size_t kMaxItems = 24;

namespace detail {

inline std::vector<std::uint32_t> horizontal_masks(const TransactionDatabase& db) {
  if (db.num_items() > kMaxItems) {
    throw Error(ErrorKind::invalid_argument,
                "oracle enumeration is bounded to " + std::to_string(kMaxItems) + " items, got " +
                    std::to_string(db.num_items()) + "; shrink the property-test databases");
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(db.total());
  for (const Transaction& t : db.transactions()) {
    std::uint32_t m = 0;
    for (ItemId id : t.items) m |= std::uint32_t{1} << id;
    masks.push_back(m);
  }
  return masks;
}

inline std::size_t scan_count(const std::vector<std::uint32_t>& rows, std::uint32_t itemset) {
  std::size_t n = 0;
  for (std::uint32_t row : rows) n += (row & itemset) == itemset;
  return n;
}

inline std::vector<ItemId> mask_items(std::uint32_t mask) {
  std::vector<ItemId> items;
  for (ItemId id = 0; mask; ++id, mask >>= 1) {
    if (mask & 1U) items.push_back(id);
  }
  return items;
}

}  // namespace detail

inline FrequentSets brute_force_frequent(const TransactionDatabase& db, const MiningConfig& config) {
  config.validate();
  const auto rows = detail::horizontal_masks(db);
  const std::size_t n = db.num_items();
  const std::size_t max_len = config.max_len.value_or(n);

  FrequentSets out;
  out.total = db.total();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k > max_len) continue;
    const std::size_t count = detail::scan_count(rows, static_cast<std::uint32_t>(mask));
    if (!is_frequent(count, db.total(), config.min_support)) continue;
    if (out.levels.size() < k) out.levels.resize(k);
    out.levels[k - 1].push_back({detail::mask_items(static_cast<std::uint32_t>(mask)), count});
  }
  for (auto& level : out.levels) std::sort(level.begin(), level.end(), lexicographic_less);
  return out;
}

inline std::vector<AssociationRule> brute_force_rules(const TransactionDatabase& db,
                                                      const MiningConfig& mining,
                                                      const RuleConfig& rules_cfg) {
  rules_cfg.validate();
  const auto rows = detail::horizontal_masks(db);
  const FrequentSets frequent = brute_force_frequent(db, mining);

  std::vector<AssociationRule> rules;
  for (const auto& level : frequent.levels) {
    for (const Itemset& z : level) {
      std::uint32_t zmask = 0;
      for (ItemId id : z.items) zmask |= std::uint32_t{1} << id;
      // Every non-empty sub-mask of Z is a candidate consequent.
      for (std::uint32_t rhs = zmask; rhs != 0; rhs = (rhs - 1) & zmask) {
        const std::uint32_t lhs = zmask & ~rhs;
        if (lhs == 0 && !rules_cfg.include_empty_lhs) continue;
        if (rules_cfg.singleton_rhs && std::popcount(rhs) != 1) continue;
        const std::size_t joint = detail::scan_count(rows, zmask);
        const std::size_t lhs_count = lhs == 0 ? db.total() : detail::scan_count(rows, lhs);
        const std::size_t rhs_count = detail::scan_count(rows, rhs);
        if (!meets_threshold(joint, lhs_count, rules_cfg.min_confidence)) continue;
        AssociationRule r;
        r.lhs = {detail::mask_items(lhs), lhs_count};
        r.rhs = {detail::mask_items(rhs), rhs_count};
        r.count = joint;
        r.metrics = compute_metrics(lhs_count, rhs_count, joint, db.total());
        rules.push_back(std::move(r));
      }
    }
  }
  sort_rules(rules, rules_cfg.ordering);
  return rules;
}

}  // namespace arminer::oracle
