#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "quakerules/basketizer.hpp"
#include "quakerules/error.hpp"

using namespace quakerules;
using namespace std::chrono;

namespace {

EventRecord at(Date day, seconds tod, std::string region) {
  EventRecord e;
  e.date = day;
  e.time_of_day = tod;
  e.latitude = 38.0;
  e.longitude = 30.0;
  e.ml = 3.0;
  e.raw_location = region;
  e.region = std::move(region);
  return e;
}

constexpr Date kDay = 2019y / August / 8;

}  // namespace

TEST(Basketize, SameDaySameRegionIsOneItem) {
  const std::vector<EventRecord> events{at(kDay, 1h, "ELAZIG"), at(kDay, 2h, "ELAZIG")};
  const auto db = basketize(events);
  ASSERT_EQ(db.n_transactions(), 1u);
  EXPECT_EQ(db.baskets()[0].items, std::vector<ItemId>{0});
  EXPECT_EQ(db.dictionary_size(), 1u);
}

TEST(Basketize, CalendarDayBoundarySplitsBaskets) {
  const Date next = year_month_day{sys_days{kDay} + days{1}};
  const std::vector<EventRecord> events{at(kDay, 23h + 59min + 59s, "VAN"), at(next, 1s, "VAN")};
  const auto db = basketize(events);
  ASSERT_EQ(db.n_transactions(), 2u);
  EXPECT_EQ(db.baskets()[0].day, kDay);
  EXPECT_EQ(db.baskets()[1].day, next);
}

TEST(Basketize, SixEventThreeDayFixture) {
  const Date d1 = 2019y / March / 1, d2 = 2019y / March / 2, d3 = 2019y / March / 5;
  const std::vector<EventRecord> events{at(d3, 1h, "C"), at(d1, 1h, "A"), at(d1, 2h, "B"),
                                        at(d2, 3h, "A"), at(d3, 4h, "B"), at(d1, 5h, "A")};
  const auto db = basketize(events);
  EXPECT_EQ(db.n_transactions(), 3u);
  EXPECT_EQ(db.support_denominator(), 3u);
  EXPECT_EQ(db.names(), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(db.baskets()[0], (Basket{d1, {0, 1}}));
  EXPECT_EQ(db.baskets()[1], (Basket{d2, {0}}));
  EXPECT_EQ(db.baskets()[2], (Basket{d3, {1, 2}}));

  std::ostringstream dump;
  dump_baskets(db, dump);
  EXPECT_EQ(dump.str(), "2019-03-01: A,B\n2019-03-02: A\n2019-03-05: B,C\n");
}

TEST(Basketize, RangeAndDenominator) {
  const Date d1 = 2019y / March / 1, d2 = 2019y / March / 4, d3 = 2019y / March / 9;
  const std::vector<EventRecord> events{at(d1, 1h, "A"), at(d2, 1h, "B"), at(d3, 1h, "C")};

  const auto ranged = basketize(events, DateRange{d2, d3});
  EXPECT_EQ(ranged.n_transactions(), 2u);
  EXPECT_EQ(ranged.names(), (std::vector<std::string>{"B", "C"}));

  const auto all_days = basketize(events, {}, DenominatorMode::all_days);
  EXPECT_EQ(all_days.n_transactions(), 3u);
  EXPECT_EQ(all_days.support_denominator(), 9u);

  const auto year = basketize(events, DateRange{2019y / January / 1, 2019y / December / 31}, DenominatorMode::all_days);
  EXPECT_EQ(year.support_denominator(), 365u);

  EXPECT_THROW(basketize(events, DateRange{d3, d1}), ConfigError);
  EXPECT_THROW(basketize(events, DateRange{2020y / January / 1, std::nullopt}), EmptyDatabaseError);
}

TEST(Basketize, Errors) {
  EXPECT_THROW(basketize({}), EmptyDatabaseError);
  auto e = at(kDay, 1h, "A");
  e.region.reset();
  EXPECT_THROW(basketize(std::vector<EventRecord>{e}), ConsistencyError);
}

TEST(ItemName, LexicographicIdsAndLookups) {
  const std::vector<EventRecord> events{at(kDay, 1h, "MUGLA"), at(kDay, 1h, "ELAZIG"), at(kDay, 1h, "VAN")};
  const auto db = basketize(events);
  EXPECT_EQ(db.item_id("ELAZIG"), 0u);
  EXPECT_EQ(db.item_id("MUGLA"), 1u);
  EXPECT_EQ(db.item_id("VAN"), 2u);
  EXPECT_EQ(db.item_name(0), "ELAZIG");
  for (ItemId k = 0; k < db.dictionary_size(); ++k) EXPECT_EQ(db.item_name(db.item_id(db.item_name(k))), db.item_name(k));
  EXPECT_THROW((void)db.item_name(3), LookupError);
  EXPECT_THROW((void)db.item_id("ANKARA"), LookupError);
}

TEST(TransactionDb, ConstructorValidates) {
  EXPECT_THROW(TransactionDb({"B", "A"}, {}), ConsistencyError);
  EXPECT_THROW(TransactionDb({"A"}, {Basket{kDay, {}}}), ConsistencyError);
  EXPECT_THROW(TransactionDb({"A"}, {Basket{kDay, {1}}}), ConsistencyError);
  EXPECT_THROW(TransactionDb({"A", "B"}, {Basket{kDay, {1, 0}}}), ConsistencyError);
  EXPECT_THROW(TransactionDb({"A"}, {Basket{kDay, {0}}, Basket{kDay, {0}}}), ConsistencyError);
  EXPECT_THROW(TransactionDb({"A"}, {Basket{kDay, {0}}}, 0), ConsistencyError);
}

TEST(Basketize, DuplicationPermutationAndPairCountProperties) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> regions{"ADANA", "BURSA", "ELAZIG", "MARMARA DENIZI", "VAN", "ZONGULDAK"};
  std::uniform_int_distribution<std::size_t> pick(0, regions.size() - 1), len(1, 60);
  std::uniform_int_distribution<int> day(0, 20), sec(0, 86399);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EventRecord> events;
    std::set<std::pair<Date, std::string>> pairs;
    for (std::size_t i = len(rng); i > 0; --i) {
      const Date d = year_month_day{sys_days{kDay} + days{day(rng)}};
      const auto& r = regions[pick(rng)];
      events.push_back(at(d, seconds{sec(rng)}, r));
      pairs.emplace(d, r);
    }
    const auto db = basketize(events);

    std::size_t total_items = 0;
    for (const auto& b : db.baskets()) total_items += b.items.size();
    EXPECT_EQ(total_items, pairs.size());

    auto duplicated = events;
    duplicated.push_back(events[std::uniform_int_distribution<std::size_t>(0, events.size() - 1)(rng)]);
    EXPECT_EQ(basketize(duplicated), db);

    auto shuffled = events;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(basketize(shuffled), db);
  }
}
