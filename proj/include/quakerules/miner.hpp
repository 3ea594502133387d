#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "quakerules/basketizer.hpp"

namespace quakerules {

/// Canonical itemset: strictly ascending, non-empty list of item ids.
class Itemset {
 public:
  /// Sorts and deduplicates. Throws std::invalid_argument when empty.
  explicit Itemset(std::vector<ItemId> ids);
  Itemset(std::initializer_list<ItemId> ids) : Itemset(std::vector<ItemId>(ids)) {}

  const std::vector<ItemId>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  ItemId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool contains(ItemId id) const;
  bool is_subset_of(const Itemset& other) const;

  /// Lexicographic over the id sequence.
  friend auto operator<=>(const Itemset&, const Itemset&) = default;
  friend bool operator==(const Itemset&, const Itemset&) = default;

 private:
  std::vector<ItemId> ids_;
};

using SupportCount = std::uint32_t;

/// Frequent itemsets with exact transaction counts.
class SupportTable {
 public:
  SupportTable(std::map<Itemset, SupportCount> entries, std::size_t n_transactions);

  const std::map<Itemset, SupportCount>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Support denominator copied from the database.
  std::size_t n_transactions() const { return n_transactions_; }

  std::optional<SupportCount> count(const Itemset& s) const;
  /// count / n_transactions. Throws ConsistencyError if `s` is not stored.
  double support(const Itemset& s) const;

  friend bool operator==(const SupportTable&, const SupportTable&) = default;

 private:
  std::map<Itemset, SupportCount> entries_;
  std::size_t n_transactions_;
};

struct MiningConfig {
  double min_support = 0.05;
  std::optional<std::size_t> max_itemset_size;
  /// Number of threads used for support counting. Results do not depend on it.
  unsigned workers = 1;

  /// Throws ConfigError unless 0 < min_support <= 1, cap >= 1 and workers >= 1.
  void validate() const;
};

/// Smallest integer count that meets `min_support` of `n_transactions`,
/// i.e. ceil(min_support * n) with a 1e-9 guard against products such as
/// 0.07 * 100 = 7.000000000000001.
SupportCount min_support_count(double min_support, std::size_t n_transactions);

/// Joins size-k itemsets sharing their first k-1 ids and drops candidates
/// with an infrequent k-subset. Input must be canonical, sorted and unique;
/// output is sorted.
std::vector<Itemset> candidate_join_prune(std::span<const Itemset> frequent_k);

/// Exact count of baskets containing each candidate, aligned with
/// `candidates`. Ids outside the dictionary count as absent.
std::vector<SupportCount> count_support(const TransactionDb& db, std::span<const Itemset> candidates,
                                        unsigned workers = 1);

/// Level-wise Apriori. Throws EmptyDatabaseError for a database without baskets.
SupportTable frequent_itemsets(const TransactionDb& db, const MiningConfig& cfg);

/// Debug dump, one `NAME1+NAME2<TAB>count<TAB>support` line per itemset,
/// support printed with 6 decimals.
void dump_itemsets(const SupportTable& table, const TransactionDb& db, std::ostream& out);

}  // namespace quakerules
