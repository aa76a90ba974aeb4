#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "arminer/miner.hpp"
#include "arminer/oracle.hpp"
#include "support/fixtures.hpp"

namespace arminer {
namespace {

std::vector<Itemset> level_of(std::initializer_list<std::vector<ItemId>> sets) {
  std::vector<Itemset> out;
  for (const auto& s : sets) out.push_back({s, 0});
  return out;
}

std::string serialize(const FrequentSets& f, const ItemCatalog& c) {
  std::ostringstream os;
  write_frequent(os, f, c);
  return os.str();
}

TEST(Threshold, EpsilonAbsorbsRepresentationError) {
  // 0.1 * 12433 evaluates to 1243.3000000000002.
  EXPECT_EQ(threshold_count(0.1, 12433), 1244u);
  // 0.3 * 10 evaluates to 3.0000000000000004 but means 3.
  EXPECT_EQ(threshold_count(0.3, 10), 3u);
  EXPECT_EQ(threshold_count(0.5, 4), 2u);
  EXPECT_EQ(threshold_count(1.0, 7), 7u);
  EXPECT_TRUE(is_frequent(3, 10, 0.3));
  EXPECT_FALSE(is_frequent(2, 10, 0.3));
}

TEST(MiningConfigTest, Validation) {
  MiningConfig c;
  c.min_support = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.min_support = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.min_support = 1.0;
  EXPECT_NO_THROW(c.validate());
  c.max_len = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(CandidateGen, JoinsSharedPrefixes) {
  const auto level = level_of({{0, 1}, {0, 2}, {1, 2}});
  const auto cands = candidate_gen(level);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].items, (std::vector<ItemId>{0, 1, 2}));
}

TEST(CandidateGen, PrunesCandidatesWithInfrequentSubset) {
  const auto level = level_of({{0, 1}, {0, 2}});
  EXPECT_TRUE(candidate_gen(level).empty());
}

TEST(CandidateGen, SingletonsJoinPairwise) {
  const auto cands = candidate_gen(level_of({{0}, {3}, {5}}));
  ASSERT_EQ(cands.size(), 3u);
  EXPECT_EQ(cands[2].items, (std::vector<ItemId>{3, 5}));
}

TEST(CandidateGen, EmptyLevel) { EXPECT_TRUE(candidate_gen({}).empty()); }

TEST(Miner, UniformDatabase) {
  const TransactionDatabase db = testing::uniform_ab();
  MiningConfig cfg;
  cfg.min_support = 0.5;
  const FrequentSets f = mine_frequent(db, cfg);
  ASSERT_EQ(f.levels.size(), 2u);
  EXPECT_EQ(f.level(1).size(), 2u);
  ASSERT_EQ(f.level(2).size(), 1u);
  EXPECT_EQ(f.level(2)[0].count, 4u);
  EXPECT_EQ(f.level(1)[0].count, 4u);
  EXPECT_EQ(f.total, 4u);
}

TEST(Miner, MaxLenCapsLevels) {
  const TransactionDatabase db = testing::uniform_ab();
  MiningConfig cfg;
  cfg.min_support = 0.5;
  cfg.max_len = 1;
  EXPECT_EQ(mine_frequent(db, cfg).levels.size(), 1u);
}

TEST(Miner, ConstantColumnIsFullySupported) {
  std::istringstream in(testing::cicy6_constant_csv(1000));
  const TransactionDatabase db = read_csv(in, SchemaConfig::cicy6()).db;
  const FrequentSets f = mine_frequent(db, {});
  const ItemId item2 = *db.catalog().find("item2", 0);
  bool found = false;
  for (const Itemset& s : f.level(1)) {
    if (s.items == std::vector<ItemId>{item2}) {
      found = true;
      EXPECT_EQ(s.count, db.total());
      EXPECT_EQ(s.support(f.total), 1.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Miner, CountCandidatesOnFixture) {
  const TransactionDatabase db = testing::cicy5_fixture();
  std::vector<ItemId> items = {*db.catalog().find("item5", 4), *db.catalog().find("item1", 3)};
  std::sort(items.begin(), items.end());
  auto counted = count_candidates(db, std::vector<Itemset>{{items, 0}, {{items[0]}, 0}});
  EXPECT_EQ(counted[0].count, 1312u);
  EXPECT_EQ(counted[1].count, db.vertical(items[0]).count());
}

TEST(Miner, WorkerCountDoesNotChangeResult) {
  const TransactionDatabase db = testing::cicy5_fixture();
  MiningConfig one, many;
  many.workers = 8;
  const FrequentSets a = mine_frequent(db, one);
  const FrequentSets b = mine_frequent(db, many);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize(a, db.catalog()), serialize(b, db.catalog()));
}

TEST(Miner, MatchesOracleOnSmallRandomDatabase) {
  std::mt19937_64 rng(20);
  const TransactionDatabase db = testing::random_db(rng, 8, 20, 0.5);
  MiningConfig cfg;
  cfg.min_support = 0.2;
  EXPECT_EQ(mine_frequent(db, cfg), oracle::brute_force_frequent(db, cfg));
}

TEST(Miner, FrequentExportFormat) {
  const TransactionDatabase db = testing::uniform_ab();
  MiningConfig cfg;
  cfg.min_support = 0.5;
  EXPECT_EQ(serialize(mine_frequent(db, cfg), db.catalog()),
            "itemset,count,support\na=1,4,1\nb=1,4,1\na=1 b=1,4,1\n");
}

class MinerProperty : public ::testing::Test {
 protected:
  std::mt19937_64 rng{1234};
};

// Exactness against the exhaustive oracle plus the structural invariants.
TEST_F(MinerProperty, OracleEquivalenceAndClosure) {
  std::uniform_int_distribution<int> items(1, 14), txs(1, 64), sup(1, 9);
  std::uniform_real_distribution<double> density(0.2, 0.8);
  for (int trial = 0; trial < 300; ++trial) {
    const TransactionDatabase db = testing::random_db(rng, items(rng), txs(rng), density(rng));
    MiningConfig cfg;
    cfg.min_support = sup(rng) / 10.0;
    const FrequentSets f = mine_frequent(db, cfg);
    ASSERT_EQ(f, oracle::brute_force_frequent(db, cfg)) << "trial " << trial;

    std::set<std::vector<ItemId>> present;
    for (const auto& level : f.levels) {
      for (const Itemset& s : level) present.insert(s.items);
    }
    for (std::size_t k = 1; k <= f.levels.size(); ++k) {
      for (const Itemset& s : f.level(k)) {
        ASSERT_EQ(s.size(), k);
        ASSERT_TRUE(is_frequent(s.count, db.total(), cfg.min_support));
        ASSERT_EQ(s.count, support_count(db, s.items));
        for (std::size_t drop = 0; drop < k && k > 1; ++drop) {
          auto sub = s.items;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          ASSERT_TRUE(present.count(sub));
        }
      }
      if (k < f.levels.size()) {
        // Candidates from level k cover level k+1.
        const auto cands = candidate_gen(f.level(k));
        for (const Itemset& next : f.level(k + 1)) {
          ASSERT_TRUE(std::any_of(cands.begin(), cands.end(),
                                  [&](const Itemset& c) { return c.items == next.items; }));
        }
      }
    }
  }
}

TEST_F(MinerProperty, RaisingSupportNeverAddsItemsets) {
  for (int trial = 0; trial < 100; ++trial) {
    const TransactionDatabase db = testing::random_db(rng, 10, 40, 0.5);
    std::set<std::vector<ItemId>> prev;
    bool first = true;
    for (int s = 1; s <= 9; ++s) {
      MiningConfig cfg;
      cfg.min_support = s / 10.0;
      std::set<std::vector<ItemId>> cur;
      for (const auto& level : mine_frequent(db, cfg).levels) {
        for (const Itemset& x : level) cur.insert(x.items);
      }
      if (!first) {
        ASSERT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      }
      prev = std::move(cur);
      first = false;
    }
  }
}

}  // namespace
}  // namespace arminer
