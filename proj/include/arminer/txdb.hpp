#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "arminer/bitmap.hpp"
#include "arminer/error.hpp"

namespace arminer {

using ItemId = std::uint32_t;
using Value = std::int64_t;
using Tid = std::uint64_t;

struct ItemEntry {
  std::string column;
  Value value = 0;

  friend bool operator==(const ItemEntry&, const ItemEntry&) = default;
};

// Bijection between (column, value) pairs and dense item ids.
class ItemCatalog {
 public:
  ItemCatalog() = default;

  // Entries must be distinct; ids are assigned in the given order.
  explicit ItemCatalog(std::vector<ItemEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const ItemEntry& e = entries_[i];
      auto [it, inserted] = index_[e.column].emplace(e.value, static_cast<ItemId>(i));
      if (!inserted) {
        throw Error(ErrorKind::invalid_argument,
                    "duplicate catalog entry " + e.column + "=" + std::to_string(e.value));
      }
      if (std::find(columns_.begin(), columns_.end(), e.column) == columns_.end()) {
        columns_.push_back(e.column);
      }
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<ItemEntry>& entries() const noexcept { return entries_; }
  // Column names in first-appearance order.
  const std::vector<std::string>& columns() const noexcept { return columns_; }

  const ItemEntry& entry(ItemId id) const {
    if (id >= entries_.size()) {
      throw Error(ErrorKind::invalid_argument, "unknown item id " + std::to_string(id));
    }
    return entries_[id];
  }

  const std::string& column_of(ItemId id) const { return entry(id).column; }

  std::string render(ItemId id) const {
    const ItemEntry& e = entry(id);
    return e.column + "=" + std::to_string(e.value);
  }

  std::optional<ItemId> find(std::string_view column, Value value) const {
    auto col = index_.find(std::string(column));
    if (col == index_.end()) return std::nullopt;
    auto it = col->second.find(value);
    if (it == col->second.end()) return std::nullopt;
    return it->second;
  }

  bool has_column(std::string_view column) const {
    return index_.find(std::string(column)) != index_.end();
  }

  // Ids of every item in `column`, ascending by value.
  std::vector<ItemId> items_of_column(std::string_view column) const {
    std::vector<ItemId> out;
    auto col = index_.find(std::string(column));
    if (col == index_.end()) return out;
    for (const auto& [value, id] : col->second) out.push_back(id);
    return out;
  }

  friend bool operator==(const ItemCatalog& a, const ItemCatalog& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<ItemEntry> entries_;
  std::vector<std::string> columns_;
  std::unordered_map<std::string, std::map<Value, ItemId>> index_;
};

struct Transaction {
  Tid tid = 0;
  std::vector<ItemId> items;  // strictly ascending

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

class DatabaseBuilder;

// The dataset: immutable transactions plus one occurrence bitmap per item,
// indexed by transaction position.
class TransactionDatabase {
 public:
  TransactionDatabase() = default;

  const ItemCatalog& catalog() const noexcept { return catalog_; }
  const std::vector<Transaction>& transactions() const noexcept { return transactions_; }
  std::size_t total() const noexcept { return transactions_.size(); }
  std::size_t num_items() const noexcept { return catalog_.size(); }

  const Bitmap& vertical(ItemId id) const {
    check_item(id);
    return vertical_[id];
  }

  void check_item(ItemId id) const {
    if (id >= vertical_.size()) {
      throw Error(ErrorKind::invalid_argument, "unknown item id " + std::to_string(id));
    }
  }

  friend bool operator==(const TransactionDatabase& a, const TransactionDatabase& b) {
    return a.catalog_ == b.catalog_ && a.transactions_ == b.transactions_ &&
           a.vertical_ == b.vertical_;
  }

 private:
  friend class DatabaseBuilder;
  TransactionDatabase(ItemCatalog catalog, std::vector<Transaction> transactions)
      : catalog_(std::move(catalog)), transactions_(std::move(transactions)) {
    vertical_.assign(catalog_.size(), Bitmap(transactions_.size()));
    for (std::size_t pos = 0; pos < transactions_.size(); ++pos) {
      for (ItemId id : transactions_[pos].items) vertical_[id].set(pos);
    }
  }

  ItemCatalog catalog_;
  std::vector<Transaction> transactions_;
  std::vector<Bitmap> vertical_;
};

// Accumulates rows of (column, value) cells. Columns are ranked by first
// appearance in a row; within a column, item ids ascend with value.
class DatabaseBuilder {
 public:
  using ColumnIndex = std::uint32_t;

  // Interns a column name without ranking it. Ranking happens on first use.
  ColumnIndex column(std::string_view name) {
    auto it = column_index_.find(std::string(name));
    if (it != column_index_.end()) return it->second;
    const auto idx = static_cast<ColumnIndex>(column_names_.size());
    column_names_.emplace_back(name);
    column_rank_.push_back(kUnranked);
    column_index_.emplace(std::string(name), idx);
    return idx;
  }

  void add_row(Tid tid, std::span<const std::pair<ColumnIndex, Value>> cells) {
    if (!tids_.insert(tid).second) {
      throw Error(ErrorKind::data, "duplicate tid " + std::to_string(tid));
    }
    for (const auto& [col, value] : cells) {
      if (col >= column_names_.size()) {
        throw Error(ErrorKind::invalid_argument, "unknown column index " + std::to_string(col));
      }
      if (column_rank_[col] == kUnranked) column_rank_[col] = next_rank_++;
    }
    row_tids_.push_back(tid);
    row_offsets_.push_back(cells_.size());
    cells_.insert(cells_.end(), cells.begin(), cells.end());
  }

  std::size_t rows() const noexcept { return row_tids_.size(); }

  TransactionDatabase build() const {
    if (row_tids_.empty()) throw Error(ErrorKind::data, "empty row set");

    // Distinct values per column.
    std::vector<std::vector<Value>> values(column_names_.size());
    for (const auto& [col, value] : cells_) values[col].push_back(value);
    for (auto& v : values) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    std::vector<ColumnIndex> ranked;
    for (ColumnIndex c = 0; c < column_names_.size(); ++c) {
      if (column_rank_[c] != kUnranked) ranked.push_back(c);
    }
    std::sort(ranked.begin(), ranked.end(),
              [&](ColumnIndex a, ColumnIndex b) { return column_rank_[a] < column_rank_[b]; });

    std::vector<ItemEntry> entries;
    std::vector<ItemId> first_id(column_names_.size(), 0);
    for (ColumnIndex c : ranked) {
      first_id[c] = static_cast<ItemId>(entries.size());
      for (Value v : values[c]) entries.push_back({column_names_[c], v});
    }

    std::vector<Transaction> transactions(row_tids_.size());
    for (std::size_t r = 0; r < row_tids_.size(); ++r) {
      const std::size_t begin = row_offsets_[r];
      const std::size_t end = r + 1 < row_offsets_.size() ? row_offsets_[r + 1] : cells_.size();
      Transaction& t = transactions[r];
      t.tid = row_tids_[r];
      t.items.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        const auto& [col, value] = cells_[i];
        const auto& vs = values[col];
        const auto offset = std::lower_bound(vs.begin(), vs.end(), value) - vs.begin();
        t.items.push_back(first_id[col] + static_cast<ItemId>(offset));
      }
      std::sort(t.items.begin(), t.items.end());
      t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
    }
    return TransactionDatabase(ItemCatalog(std::move(entries)), std::move(transactions));
  }

 private:
  static constexpr std::size_t kUnranked = static_cast<std::size_t>(-1);

  std::vector<std::string> column_names_;
  std::vector<std::size_t> column_rank_;
  std::unordered_map<std::string, ColumnIndex> column_index_;
  std::size_t next_rank_ = 0;

  std::unordered_set<Tid> tids_;
  std::vector<Tid> row_tids_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::pair<ColumnIndex, Value>> cells_;
};

struct Cell {
  std::string column;
  Value value = 0;
};

struct Row {
  Tid tid = 0;
  std::vector<Cell> cells;
};

inline TransactionDatabase build_database(std::span<const Row> rows) {
  DatabaseBuilder builder;
  std::vector<std::pair<DatabaseBuilder::ColumnIndex, Value>> cells;
  for (const Row& row : rows) {
    cells.clear();
    for (const Cell& c : row.cells) cells.emplace_back(builder.column(c.column), c.value);
    builder.add_row(row.tid, cells);
  }
  return builder.build();
}

// N(X): number of transactions containing every item of `items`.
// N of the empty set is the database total.
inline std::size_t support_count(const TransactionDatabase& db, std::span<const ItemId> items) {
  if (items.empty()) return db.total();
  std::vector<const Bitmap*> operands;
  operands.reserve(items.size());
  for (ItemId id : items) operands.push_back(&db.vertical(id));
  return intersection_count(operands);
}

}  // namespace arminer
