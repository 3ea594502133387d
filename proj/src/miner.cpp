#include "quakerules/miner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "quakerules/error.hpp"

namespace quakerules {

Itemset::Itemset(std::vector<ItemId> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw std::invalid_argument("itemset must not be empty");
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool Itemset::contains(ItemId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

bool Itemset::is_subset_of(const Itemset& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

SupportTable::SupportTable(std::map<Itemset, SupportCount> entries, std::size_t n_transactions)
    : entries_(std::move(entries)), n_transactions_(n_transactions) {
  for (const auto& [set, c] : entries_) {
    if (c < 1 || c > n_transactions_) throw ConsistencyError("support count outside [1, n_transactions]");
  }
}

std::optional<SupportCount> SupportTable::count(const Itemset& s) const {
  const auto it = entries_.find(s);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double SupportTable::support(const Itemset& s) const {
  const auto c = count(s);
  if (!c) throw ConsistencyError("itemset missing from support table");
  return static_cast<double>(*c) / static_cast<double>(n_transactions_);
}

void MiningConfig::validate() const {
  if (!(min_support > 0.0 && min_support <= 1.0)) throw ConfigError("min_support must be in (0, 1]");
  if (max_itemset_size && *max_itemset_size < 1) throw ConfigError("max_itemset_size must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

SupportCount min_support_count(double min_support, std::size_t n_transactions) {
  const double exact = min_support * static_cast<double>(n_transactions);
  const double c = std::ceil(exact - 1e-9);
  return static_cast<SupportCount>(std::max(1.0, c));
}

namespace {

struct IdsLess {
  bool operator()(const Itemset& a, const std::vector<ItemId>& b) const { return a.ids() < b; }
  bool operator()(const std::vector<ItemId>& a, const Itemset& b) const { return a < b.ids(); }
};

}  // namespace

std::vector<Itemset> candidate_join_prune(std::span<const Itemset> frequent_k) {
  std::vector<Itemset> out;
  if (frequent_k.empty()) return out;
  const std::size_t k = frequent_k.front().size();

  const auto is_frequent = [&](const std::vector<ItemId>& ids) {
    return std::binary_search(frequent_k.begin(), frequent_k.end(), ids, IdsLess{});
  };

  std::vector<ItemId> joined(k + 1);
  std::vector<ItemId> subset(k);
  for (std::size_t i = 0; i < frequent_k.size(); ++i) {
    const auto& a = frequent_k[i].ids();
    for (std::size_t j = i + 1; j < frequent_k.size(); ++j) {
      const auto& b = frequent_k[j].ids();
      // Sorted input keeps itemsets with a shared (k-1)-prefix contiguous.
      if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
      std::copy(a.begin(), a.end(), joined.begin());
      joined[k] = b.back();

      bool keep = true;
      // Dropping either of the last two ids gives a or b, both frequent.
      for (std::size_t drop = 0; keep && drop + 2 <= k; ++drop) {
        std::copy(joined.begin(), joined.begin() + static_cast<std::ptrdiff_t>(drop), subset.begin());
        std::copy(joined.begin() + static_cast<std::ptrdiff_t>(drop) + 1, joined.end(),
                  subset.begin() + static_cast<std::ptrdiff_t>(drop));
        keep = is_frequent(subset);
      }
      if (keep) out.emplace_back(joined);
    }
  }
  return out;
}

namespace {

// Per-basket membership lookup. Small dictionaries use one bit vector per
// basket; larger ones fall back to the sorted id arrays.
class BasketIndex {
 public:
  static constexpr std::size_t kBitsetLimit = 1024;

  explicit BasketIndex(const TransactionDb& db) : db_(db), n_items_(db.dictionary_size()) {
    use_bits_ = n_items_ <= kBitsetLimit;
    if (!use_bits_) return;
    words_ = (n_items_ + 63) / 64;
    bits_.assign(words_ * db.n_transactions(), 0);
    for (std::size_t b = 0; b < db.n_transactions(); ++b) {
      for (const ItemId id : db.baskets()[b].items) bits_[b * words_ + id / 64] |= std::uint64_t{1} << (id % 64);
    }
  }

  std::size_t size() const { return db_.n_transactions(); }

  bool contains(std::size_t basket, const Itemset& s) const {
    if (s.ids().back() >= n_items_) return false;
    if (use_bits_) {
      const std::uint64_t* row = bits_.data() + basket * words_;
      return std::all_of(s.begin(), s.end(),
                         [row](ItemId id) { return (row[id / 64] >> (id % 64)) & 1u; });
    }
    const auto& items = db_.baskets()[basket].items;
    return std::includes(items.begin(), items.end(), s.begin(), s.end());
  }

 private:
  const TransactionDb& db_;
  std::size_t n_items_;
  bool use_bits_ = false;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::vector<SupportCount> count_with_index(const BasketIndex& index, std::span<const Itemset> candidates,
                                           unsigned workers) {
  const std::size_t n_baskets = index.size();
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(workers, n_baskets));
  std::vector<std::vector<SupportCount>> partial(shards, std::vector<SupportCount>(candidates.size(), 0));

  const auto count_shard = [&](std::size_t shard) {
    const std::size_t lo = n_baskets * shard / shards;
    const std::size_t hi = n_baskets * (shard + 1) / shards;
    auto& counts = partial[shard];
    for (std::size_t b = lo; b < hi; ++b) {
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (index.contains(b, candidates[c])) ++counts[c];
      }
    }
  };

  if (shards == 1) {
    count_shard(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) threads.emplace_back(count_shard, s);
  }

  std::vector<SupportCount> total(candidates.size(), 0);
  for (const auto& counts : partial) {
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += counts[c];
  }
  return total;
}

}  // namespace

std::vector<SupportCount> count_support(const TransactionDb& db, std::span<const Itemset> candidates,
                                        unsigned workers) {
  const BasketIndex index(db);
  return count_with_index(index, candidates, std::max(1u, workers));
}

SupportTable frequent_itemsets(const TransactionDb& db, const MiningConfig& cfg) {
  cfg.validate();
  if (db.n_transactions() == 0) throw EmptyDatabaseError("cannot mine an empty transaction database");

  const SupportCount threshold = min_support_count(cfg.min_support, db.support_denominator());
  const std::size_t cap = cfg.max_itemset_size.value_or(db.dictionary_size());
  const BasketIndex index(db);

  std::vector<Itemset> candidates;
  candidates.reserve(db.dictionary_size());
  for (ItemId id = 0; id < db.dictionary_size(); ++id) candidates.push_back(Itemset{id});

  std::map<Itemset, SupportCount> table;
  for (std::size_t k = 1; k <= cap && !candidates.empty(); ++k) {
    const auto counts = count_with_index(index, candidates, cfg.workers);
    std::vector<Itemset> frequent;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (counts[c] >= threshold) {
        table.emplace(candidates[c], counts[c]);
        frequent.push_back(std::move(candidates[c]));
      }
    }
    if (k == cap) break;
    candidates = candidate_join_prune(frequent);
  }
  return SupportTable(std::move(table), db.support_denominator());
}

void dump_itemsets(const SupportTable& table, const TransactionDb& db, std::ostream& out) {
  std::string buf;
  std::array<char, 64> num{};
  for (const auto& [set, count] : table.entries()) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i > 0) buf += '+';
      buf += db.item_name(set[i]);
    }
    buf += '\t';
    buf += std::to_string(count);
    buf += '\t';
    const double support = static_cast<double>(count) / static_cast<double>(table.n_transactions());
    const auto [ptr, ec] = std::to_chars(num.data(), num.data() + num.size(), support, std::chars_format::fixed, 6);
    buf.append(num.data(), ptr);
    buf += '\n';
  }
  out << buf;
}

}  // namespace quakerules
