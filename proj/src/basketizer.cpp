#include "quakerules/basketizer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "quakerules/error.hpp"

namespace quakerules {

bool DateRange::contains(const Date& d) const {
  if (from && d < *from) return false;
  if (to && d > *to) return false;
  return true;
}

bool DateRange::empty() const { return from && to && *from > *to; }

TransactionDb::TransactionDb(std::vector<std::string> names, std::vector<Basket> baskets,
                             std::optional<std::size_t> support_denominator)
    : names_(std::move(names)), baskets_(std::move(baskets)), denominator_(support_denominator.value_or(baskets_.size())) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i > 0 && !(names_[i - 1] < names_[i]))
      throw ConsistencyError("item dictionary must be strictly lexicographically ordered");
    ids_.emplace(names_[i], static_cast<ItemId>(i));
  }
  for (std::size_t b = 0; b < baskets_.size(); ++b) {
    const auto& items = baskets_[b].items;
    if (items.empty()) throw ConsistencyError("basket without items");
    if (!std::is_sorted(items.begin(), items.end()) || std::adjacent_find(items.begin(), items.end()) != items.end())
      throw ConsistencyError("basket items must be sorted and unique");
    if (items.back() >= names_.size()) throw ConsistencyError("basket refers to an unknown item id");
    if (b > 0 && !(baskets_[b - 1].day < baskets_[b].day))
      throw ConsistencyError("basket days must be strictly increasing");
  }
  if (denominator_ < baskets_.size()) throw ConsistencyError("support denominator below transaction count");
}

const std::string& TransactionDb::item_name(ItemId id) const {
  if (id >= names_.size()) throw LookupError("unknown item id " + std::to_string(id));
  return names_[id];
}

ItemId TransactionDb::item_id(const std::string& name) const {
  const auto it = ids_.find(name);
  if (it == ids_.end()) throw LookupError("unknown item name " + name);
  return it->second;
}

namespace {

std::size_t days_inclusive(const Date& a, const Date& b) {
  return static_cast<std::size_t>((std::chrono::sys_days{b} - std::chrono::sys_days{a}).count() + 1);
}

TransactionDb build_db(const std::map<Date, std::set<std::string>>& by_day, std::optional<std::size_t> denominator) {
  std::set<std::string> all_names;
  for (const auto& [day, regions] : by_day) all_names.insert(regions.begin(), regions.end());
  std::vector<std::string> names(all_names.begin(), all_names.end());

  std::map<std::string, ItemId> ids;
  for (std::size_t i = 0; i < names.size(); ++i) ids.emplace(names[i], static_cast<ItemId>(i));

  std::vector<Basket> baskets;
  baskets.reserve(by_day.size());
  for (const auto& [day, regions] : by_day) {
    Basket basket{day, {}};
    // std::set iteration is already lexicographic, so ids come out sorted.
    for (const auto& r : regions) basket.items.push_back(ids.at(r));
    baskets.push_back(std::move(basket));
  }
  return TransactionDb(std::move(names), std::move(baskets), denominator);
}

}  // namespace

TransactionDb basketize(std::span<const EventRecord> events, const DateRange& range, DenominatorMode mode) {
  if (range.empty()) throw ConfigError("date range is empty");
  std::map<Date, std::set<std::string>> by_day;
  for (const auto& e : events) {
    if (!e.region) throw ConsistencyError("event on " + format_date(e.date) + " has no canonical region");
    if (!range.contains(e.date)) continue;
    by_day[e.date].insert(*e.region);
  }
  if (by_day.empty()) throw EmptyDatabaseError("no transactions: no qualifying events in the selected range");

  std::optional<std::size_t> denominator;
  if (mode == DenominatorMode::all_days) {
    const Date first = range.from.value_or(by_day.begin()->first);
    const Date last = range.to.value_or(by_day.rbegin()->first);
    denominator = days_inclusive(first, last);
  }
  return build_db(by_day, denominator);
}

TransactionDb make_transaction_db(const std::vector<std::pair<Date, std::vector<std::string>>>& days) {
  std::map<Date, std::set<std::string>> by_day;
  for (const auto& [day, names] : days) by_day[day].insert(names.begin(), names.end());
  std::erase_if(by_day, [](const auto& kv) { return kv.second.empty(); });
  if (by_day.empty()) throw EmptyDatabaseError("no transactions");
  return build_db(by_day, std::nullopt);
}

void dump_baskets(const TransactionDb& db, std::ostream& out) {
  std::string buf;
  for (const auto& basket : db.baskets()) {
    buf += format_date(basket.day);
    buf += ": ";
    for (std::size_t i = 0; i < basket.items.size(); ++i) {
      if (i > 0) buf += ',';
      buf += db.item_name(basket.items[i]);
    }
    buf += '\n';
  }
  out << buf;
}

}  // namespace quakerules
