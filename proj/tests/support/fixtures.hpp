#pragma once

// Synthetic databases shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arminer/ingest.hpp"
#include "arminer/txdb.hpp"

namespace arminer::testing {

// Uniform database: `n` transactions all equal to {a, b}.
inline TransactionDatabase uniform_ab(std::size_t n = 4) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({i, {{"a", 1}, {"b", 1}}});
  return build_database(rows);
}

// Random basket database: items are (column "c<k>", value 1); each
// transaction holds each of `n_items` items independently with probability p.
inline TransactionDatabase random_db(std::mt19937_64& rng, std::size_t n_items,
                                     std::size_t n_transactions, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Row> rows;
  for (std::size_t t = 0; t < n_transactions; ++t) {
    Row row{t, {}};
    for (std::size_t i = 0; i < n_items; ++i) {
      if (coin(rng)) row.cells.push_back({"c" + std::to_string(i), 1});
    }
    rows.push_back(std::move(row));
  }
  // Guarantee at least one item so the catalog is not empty.
  rows.front().cells.push_back({"c0", 1});
  return build_database(rows);
}

// Random categorical table: `n_cols` columns, values in [0, n_values).
inline TransactionDatabase random_table(std::mt19937_64& rng, std::size_t n_cols,
                                        std::size_t n_values, std::size_t n_rows) {
  std::uniform_int_distribution<int> value(0, static_cast<int>(n_values) - 1);
  std::vector<Row> rows;
  for (std::size_t t = 0; t < n_rows; ++t) {
    Row row{t, {}};
    for (std::size_t c = 0; c < n_cols; ++c) {
      row.cells.push_back({"col" + std::to_string(c), value(rng)});
    }
    rows.push_back(std::move(row));
  }
  return build_database(rows);
}

inline constexpr std::size_t kCicy5Total = 12433;

// 12,433-row CICY5-shaped table (columns h11 h21 h13 h14 h22 h23) whose
// contingency counts reproduce the first ten rules of the published CICY5
// listing:
//   N(h22=4)=1358  N(h22=7)=1518  N(h22=5)=2460
//   N(h11=3)=4812  N(h11=4)=5406  N(h13=0)=11899  N(h21=0)=12147
//   N(h22=4,h11=3)=1312  N(h22=4,h13=0)=1336  N(h22=4,h21=0)=1357
//   N(h22=7,h11=4)=1405  N(h22=7,h13=0)=1484  N(h22=7,h21=0)=1516
//   N(h22=5,h11=3)=2428  N(h22=5,h13=0)=2401
// Rows are laid out in four blocks by h22 value: 4, 7, 5, then the rest.
inline std::string cicy5_fixture_csv() {
  struct Block {
    std::size_t size;
    int h22;  // -1: spread over 10..32
    std::size_t h11_main;
    int h11_main_value;
    std::size_t h11_second;  // only used by the background block
    int h11_second_value;
    std::size_t h13_zero;
    std::size_t h21_zero;
  };
  const Block blocks[] = {
      {1358, 4, 1312, 3, 0, 0, 1336, 1357},
      {1518, 7, 1405, 4, 0, 0, 1484, 1516},
      {2460, 5, 2428, 3, 0, 0, 2401, 2455},
      {7097, -1, 1072, 3, 4001, 4, 6678, 6819},
  };

  std::ostringstream os;
  os << "h11,h21,h13,h14,h22,h23\n";
  std::size_t row = 0;
  for (const Block& b : blocks) {
    for (std::size_t i = 0; i < b.size; ++i, ++row) {
      int h11;
      if (i < b.h11_main) {
        h11 = b.h11_main_value;
      } else if (i < b.h11_main + b.h11_second) {
        h11 = b.h11_second_value;
      } else {
        h11 = b.h22 < 0 ? 6 + static_cast<int>(i % 10) : (b.h11_main_value == 3 ? 2 : 5);
      }
      // h21 nonzero at the start of each block, h13 nonzero at the end.
      const int h21 = i < b.size - b.h21_zero ? 1 + static_cast<int>(i % 3) : 0;
      const int h13 = i >= b.h13_zero ? 1 + static_cast<int>(i % 5) : 0;
      const int h14 = 20 + static_cast<int>((row * 7) % 50);
      const int h22 = b.h22 >= 0 ? b.h22 : 10 + static_cast<int>(i % 23);
      const int h23 = 100 + static_cast<int>((row * 13) % 97);
      os << h11 << ',' << h21 << ',' << h13 << ',' << h14 << ',' << h22 << ',' << h23 << '\n';
    }
  }
  return os.str();
}

inline TransactionDatabase cicy5_fixture() {
  std::istringstream in(cicy5_fixture_csv());
  return read_csv(in, SchemaConfig::cicy5()).db;
}

// CICY6-shaped table with h12, h13, h14 and h23 identically zero.
inline std::string cicy6_constant_csv(std::size_t n_rows, std::uint64_t seed = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(1, 12), mid(2, 40), big(50, 400);
  std::ostringstream os;
  os << "h11,h12,h13,h14,h15,h22,h23,h24,h33\n";
  for (std::size_t r = 0; r < n_rows; ++r) {
    os << small(rng) << ",0,0,0," << mid(rng) << ',' << big(rng) << ",0," << big(rng) << ','
       << big(rng) << '\n';
  }
  return os.str();
}

// Large CICY6-shaped table. Four columns are constant zero; the other five
// each carry six values at roughly 14% apiece plus a sparse tail, and h22
// tracks h11 most of the time, so more than 30 items clear 10% support and
// some cross-column pairs are frequent.
inline std::string cicy6_scale_csv(std::size_t n_rows, std::uint64_t seed = 2025) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> tail(100, 199);
  const auto draw = [&](int base) {
    const double u = unit(rng);
    if (u < 0.85) return base + static_cast<int>(u / (0.85 / 6.0));
    return tail(rng);
  };
  std::ostringstream os;
  os << "h11,h12,h13,h14,h15,h22,h23,h24,h33\n";
  for (std::size_t r = 0; r < n_rows; ++r) {
    const int h11 = draw(1);
    const int h15 = draw(10);
    const int h22 = unit(rng) < 0.8 ? h11 + 20 : draw(20);
    const int h24 = draw(30);
    const int h33 = draw(40);
    os << h11 << ",0,0,0," << h15 << ',' << h22 << ",0," << h24 << ',' << h33 << '\n';
  }
  return os.str();
}

}  // namespace arminer::testing
