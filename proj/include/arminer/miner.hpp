#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "arminer/bitmap.hpp"
#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/txdb.hpp"

namespace arminer {

struct Itemset {
  std::vector<ItemId> items;  // strictly ascending
  std::size_t count = 0;      // N(X)

  std::size_t size() const noexcept { return items.size(); }
  double support(std::size_t total) const {
    return static_cast<double>(count) / static_cast<double>(total);
  }

  friend bool operator==(const Itemset&, const Itemset&) = default;
};

inline bool lexicographic_less(const Itemset& a, const Itemset& b) {
  return a.items < b.items;
}

// Smallest count satisfying count >= fraction * base. The epsilon absorbs
// representation error in the product, e.g. 0.1 * 12433 = 1243.3000000000002.
// Shared by frequency and confidence thresholds.
inline std::size_t threshold_count(double fraction, std::size_t base) {
  const double bound = std::ceil(fraction * static_cast<double>(base) - 1e-9);
  return bound <= 0.0 ? 0 : static_cast<std::size_t>(bound);
}

inline bool meets_threshold(std::size_t count, std::size_t base, double fraction) {
  return count >= threshold_count(fraction, base);
}

inline bool is_frequent(std::size_t count, std::size_t total, double min_support) {
  return meets_threshold(count, total, min_support);
}

struct MiningConfig {
  double min_support = 0.10;
  std::optional<std::size_t> max_len;  // unlimited when empty
  unsigned workers = 1;

  void validate() const {
    if (!(min_support > 0.0 && min_support <= 1.0)) {
      throw Error(ErrorKind::invalid_argument, "min-support must lie in (0,1]");
    }
    if (max_len && *max_len == 0) {
      throw Error(ErrorKind::invalid_argument, "max-len must be positive");
    }
    if (workers == 0) throw Error(ErrorKind::invalid_argument, "workers must be positive");
  }
};

struct FrequentSets {
  std::vector<std::vector<Itemset>> levels;  // levels[k - 1] holds the k-itemsets
  std::size_t total = 0;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& level : levels) n += level.size();
    return n;
  }

  std::span<const Itemset> level(std::size_t k) const {
    if (k == 0 || k > levels.size()) return {};
    return levels[k - 1];
  }

  friend bool operator==(const FrequentSets&, const FrequentSets&) = default;
};

// F(k) x F(k) prefix join followed by the downward-closure prune. `level`
// must hold k-itemsets in lexicographic order; the result is lexicographic.
inline std::vector<Itemset> candidate_gen(std::span<const Itemset> level) {
  std::vector<Itemset> out;
  if (level.empty()) return out;
  const std::size_t k = level.front().size();

  const auto has_subset = [&](const std::vector<ItemId>& subset) {
    auto it = std::lower_bound(level.begin(), level.end(), subset,
                               [](const Itemset& s, const std::vector<ItemId>& v) { return s.items < v; });
    return it != level.end() && it->items == subset;
  };

  const auto same_prefix = [k](const Itemset& a, const Itemset& b) {
    return std::equal(a.items.begin(), a.items.begin() + static_cast<std::ptrdiff_t>(k - 1),
                      b.items.begin());
  };

  std::vector<ItemId> subset(k);
  for (std::size_t i = 0; i < level.size(); ++i) {
    for (std::size_t j = i + 1; j < level.size() && same_prefix(level[i], level[j]); ++j) {
      Itemset cand;
      cand.items = level[i].items;
      cand.items.push_back(level[j].items.back());

      // Dropping either of the last two items yields a join parent, so only
      // the first k-1 positions need checking.
      bool keep = true;
      for (std::size_t drop = 0; drop + 2 <= k && keep; ++drop) {
        std::size_t w = 0;
        for (std::size_t p = 0; p <= k; ++p) {
          if (p != drop) subset[w++] = cand.items[p];
        }
        keep = has_subset(subset);
      }
      if (keep) out.push_back(std::move(cand));
    }
  }
  return out;
}

// Fills in N(X) for every candidate by bitmap intersection. Work is split by
// candidate index, so the result does not depend on `workers`.
inline void count_candidates(const TransactionDatabase& db, std::span<Itemset> candidates,
                             unsigned workers = 1) {
  for (const Itemset& c : candidates) {
    for (ItemId id : c.items) db.check_item(id);
  }

  const auto count_range = [&](std::size_t begin, std::size_t end) {
    std::vector<const Bitmap*> operands;
    for (std::size_t i = begin; i < end; ++i) {
      Itemset& c = candidates[i];
      if (c.items.empty()) {
        c.count = db.total();
        continue;
      }
      operands.clear();
      for (ItemId id : c.items) operands.push_back(&db.vertical(id));
      c.count = intersection_count(operands);
    }
  };

  const std::size_t n = candidates.size();
  const std::size_t n_workers = std::min<std::size_t>(std::max(1u, workers), n);
  if (n_workers <= 1) {
    count_range(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  const std::size_t chunk = (n + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(count_range, begin, end);
  }
  for (auto& t : pool) t.join();
}

inline std::vector<Itemset> count_candidates(const TransactionDatabase& db,
                                             std::vector<Itemset> candidates,
                                             unsigned workers = 1) {
  count_candidates(db, std::span<Itemset>(candidates), workers);
  return candidates;
}

// Level-wise Apriori.
inline FrequentSets mine_frequent(const TransactionDatabase& db, const MiningConfig& config) {
  config.validate();
  if (db.total() == 0) throw Error(ErrorKind::invalid_argument, "cannot mine an empty database");

  FrequentSets result;
  result.total = db.total();
  const std::size_t min_count = threshold_count(config.min_support, db.total());
  const std::size_t max_len = config.max_len.value_or(db.num_items());

  std::vector<Itemset> level;
  for (ItemId id = 0; id < db.num_items(); ++id) {
    const std::size_t n = db.vertical(id).count();
    if (n >= min_count) level.push_back({{id}, n});
  }

  while (!level.empty() && result.levels.size() < max_len) {
    result.levels.push_back(level);
    if (result.levels.size() == max_len) break;
    std::vector<Itemset> candidates = candidate_gen(level);
    count_candidates(db, std::span<Itemset>(candidates), config.workers);
    level.clear();
    for (auto& c : candidates) {
      if (c.count >= min_count) level.push_back(std::move(c));
    }
  }
  return result;
}

inline std::string render_items(const ItemCatalog& catalog, std::span<const ItemId> items,
                                std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += catalog.render(items[i]);
  }
  return out;
}

// One line per itemset: space-separated items, count, full-precision support.
inline void write_frequent(std::ostream& os, const FrequentSets& frequent,
                           const ItemCatalog& catalog) {
  os << "itemset,count,support\n";
  for (const auto& level : frequent.levels) {
    for (const Itemset& s : level) {
      os << render_items(catalog, s.items, " ") << ',' << s.count << ','
         << format_double(s.support(frequent.total)) << '\n';
    }
  }
}

}  // namespace arminer
