#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "quakerules/catalog.hpp"

namespace quakerules {

using ItemId = std::uint32_t;

/// Inclusive calendar-date interval.
struct DateRange {
  std::optional<Date> from;
  std::optional<Date> to;

  bool contains(const Date& d) const;
  bool empty() const;
};

/// All events of one calendar day. `items` is sorted and duplicate free.
struct Basket {
  Date day{};
  std::vector<ItemId> items;

  friend bool operator==(const Basket&, const Basket&) = default;
};

/// How the support denominator is chosen.
///   active_days: number of days with at least one qualifying event.
///   all_days: every calendar day of the date range, or of the span between
///             the first and last basket when no bound is given.
enum class DenominatorMode { active_days, all_days };

/// Daily transactions plus the item dictionary. Item ids are dense and
/// assigned in lexicographic order of the region names, so comparing id
/// sequences is the same as comparing name sequences.
class TransactionDb {
 public:
  /// Validates the dictionary ordering, basket canonical form and day order.
  /// `support_denominator` defaults to the number of baskets.
  TransactionDb(std::vector<std::string> names, std::vector<Basket> baskets,
                std::optional<std::size_t> support_denominator = std::nullopt);

  std::size_t dictionary_size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& item_name(ItemId id) const;
  ItemId item_id(const std::string& name) const;

  const std::vector<Basket>& baskets() const { return baskets_; }
  std::size_t n_transactions() const { return baskets_.size(); }
  /// Denominator of every support fraction; >= n_transactions().
  std::size_t support_denominator() const { return denominator_; }

  friend bool operator==(const TransactionDb& a, const TransactionDb& b) {
    return a.names_ == b.names_ && a.baskets_ == b.baskets_ && a.denominator_ == b.denominator_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId> ids_;
  std::vector<Basket> baskets_;
  std::size_t denominator_;
};

/// Groups filtered, normalized events by calendar date into baskets of
/// distinct regions. Throws ConsistencyError for an event without a region,
/// ConfigError for an empty range and EmptyDatabaseError when no basket
/// remains.
TransactionDb basketize(std::span<const EventRecord> events, const DateRange& range = {},
                        DenominatorMode mode = DenominatorMode::active_days);

/// Builds a database directly from named baskets, mainly for tests and tools.
TransactionDb make_transaction_db(const std::vector<std::pair<Date, std::vector<std::string>>>& days);

/// Debug dump, one `YYYY-MM-DD: NAME1,NAME2` line per basket.
void dump_baskets(const TransactionDb& db, std::ostream& out);

}  // namespace quakerules
