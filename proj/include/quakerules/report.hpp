#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quakerules/basketizer.hpp"
#include "quakerules/catalog.hpp"
#include "quakerules/rules.hpp"

namespace quakerules {

enum class TableFormat { csv, markdown };

/// Rounds half-to-even on the exact binary value and prints exactly three
/// decimals with a dot; +inf prints as `inf`. Negative zero prints as 0.000.
std::string format_metric(double value);

/// `(NAME1, NAME2)` with names in lexicographic order.
std::string format_itemset(const Itemset& s, const TransactionDb& db);

/// Rule table with columns antecedent, consequent, support, confidence,
/// lift, leverage, conviction in the order given.
///
/// CSV: optional `# title` line, a header, `;`-separated rows.
/// Markdown: optional `### title` heading and a pipe table.
/// Throws LookupError for an item id unknown to `db`.
std::string emit_rule_table(std::span<const AssociationRule> rules, const TransactionDb& db, TableFormat format,
                            std::string_view title = {});

using LabeledStats = std::pair<std::string, CatalogStats>;

/// One row per label: label, n_all, n_within_borders, n_ml_ge_threshold,
/// max_ml with one decimal (`-` when absent).
std::string emit_stats_table(std::span<const LabeledStats> stats, TableFormat format);

/// A rule row read back from an emitted CSV table.
struct ParsedRuleRow {
  std::vector<std::string> antecedent;
  std::vector<std::string> consequent;
  double support = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
  double leverage = 0.0;
  double conviction = 0.0;
};

/// Reads the rows of an emit_rule_table CSV document. Throws ConfigError on
/// a malformed row.
std::vector<ParsedRuleRow> parse_rule_table_csv(std::string_view document);

}  // namespace quakerules
