#include "quakerules/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "quakerules/error.hpp"

namespace quakerules {

namespace {

constexpr std::string_view kCsvRuleHeader = "antecedent;consequent;support;confidence;lift;leverage;conviction";
constexpr std::string_view kMdRuleHeader =
    "| Antecedent | Consequent | Support | Confidence | Lift | Leverage | Conviction |\n"
    "|---|---|---:|---:|---:|---:|---:|\n";
constexpr std::string_view kCsvStatsHeader = "label;n_all;n_within_borders;n_ml_ge_threshold;max_ml";
constexpr std::string_view kMdStatsHeader =
    "| Label | All events | Within borders | ML >= threshold within borders | ML (max) |\n"
    "|---|---:|---:|---:|---:|\n";

std::string fixed(double value, int decimals) {
  std::array<char, 128> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
  std::string out(buf.data(), ptr);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::vector<std::string> parse_itemset_cell(std::string_view cell) {
  if (cell.size() < 3 || cell.front() != '(' || cell.back() != ')') throw ConfigError("malformed itemset cell");
  std::vector<std::string> names;
  for (const auto part : split(cell.substr(1, cell.size() - 2), ", ")) names.emplace_back(part);
  return names;
}

double parse_metric_cell(std::string_view cell) {
  if (cell == "inf") return kInfiniteConviction;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) throw ConfigError("malformed metric cell");
  return value;
}

}  // namespace

std::string format_metric(double value) {
  if (std::isinf(value) && value > 0) return "inf";
  return fixed(value, 3);
}

std::string format_itemset(const Itemset& s, const TransactionDb& db) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ", ";
    out += db.item_name(s[i]);
  }
  out += ')';
  return out;
}

std::string emit_rule_table(std::span<const AssociationRule> rules, const TransactionDb& db, TableFormat format,
                            std::string_view title) {
  std::string doc;
  if (format == TableFormat::csv) {
    if (!title.empty()) doc.append("# ").append(title).append("\n");
    doc.append(kCsvRuleHeader).append("\n");
  } else {
    if (!title.empty()) doc.append("### ").append(title).append("\n\n");
    doc.append(kMdRuleHeader);
  }

  const std::string_view sep = format == TableFormat::csv ? ";" : " | ";
  for (const auto& rule : rules) {
    const auto& m = rule.metrics;
    const std::array<std::string, 7> cells{format_itemset(rule.antecedent, db), format_itemset(rule.consequent, db),
                                           format_metric(m.support),           format_metric(m.confidence),
                                           format_metric(m.lift),              format_metric(m.leverage),
                                           format_metric(m.conviction)};
    if (format == TableFormat::markdown) doc += "| ";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) doc += sep;
      doc += cells[i];
    }
    if (format == TableFormat::markdown) doc += " |";
    doc += '\n';
  }
  return doc;
}

std::string emit_stats_table(std::span<const LabeledStats> stats, TableFormat format) {
  std::string doc;
  if (format == TableFormat::csv) {
    doc.append(kCsvStatsHeader).append("\n");
  } else {
    doc.append(kMdStatsHeader);
  }
  const std::string_view sep = format == TableFormat::csv ? ";" : " | ";
  for (const auto& [label, s] : stats) {
    const std::array<std::string, 5> cells{label, std::to_string(s.n_all), std::to_string(s.n_within_borders),
                                           std::to_string(s.n_ml_ge_threshold),
                                           s.max_ml ? fixed(*s.max_ml, 1) : std::string("-")};
    if (format == TableFormat::markdown) doc += "| ";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) doc += sep;
      doc += cells[i];
    }
    if (format == TableFormat::markdown) doc += " |";
    doc += '\n';
  }
  return doc;
}

std::vector<ParsedRuleRow> parse_rule_table_csv(std::string_view document) {
  std::vector<ParsedRuleRow> rows;
  for (auto line : split(document, "\n")) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#' || line == kCsvRuleHeader) continue;
    const auto cells = split(line, ";");
    if (cells.size() != 7) throw ConfigError("rule row must have 7 cells");
    rows.push_back({parse_itemset_cell(cells[0]), parse_itemset_cell(cells[1]), parse_metric_cell(cells[2]),
                    parse_metric_cell(cells[3]), parse_metric_cell(cells[4]), parse_metric_cell(cells[5]),
                    parse_metric_cell(cells[6])});
  }
  return rows;
}

}  // namespace quakerules
