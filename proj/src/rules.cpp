#include "quakerules/rules.hpp"

#include <algorithm>
#include <cstdint>

#include "quakerules/error.hpp"

namespace quakerules {

double confidence(double supp_xy, double supp_x) {
  if (!(supp_x > 0.0)) throw UndefinedRuleError("confidence undefined: antecedent support is zero");
  return supp_xy / supp_x;
}

double lift(double conf, double supp_y) {
  if (!(supp_y > 0.0)) throw UndefinedRuleError("lift undefined: consequent support is zero");
  return conf / supp_y;
}

double leverage(double supp_xy, double supp_x, double supp_y) { return supp_xy - supp_x * supp_y; }

double conviction(double supp_y, double conf) {
  if (conf >= 1.0) return supp_y >= 1.0 ? 1.0 : kInfiniteConviction;
  return (1.0 - supp_y) / (1.0 - conf);
}

RuleMetrics rule_metrics(double supp_xy, double supp_x, double supp_y) {
  if (!(supp_y > 0.0)) throw UndefinedRuleError("lift undefined: consequent support is zero");
  RuleMetrics m;
  m.support = supp_xy;
  m.confidence = confidence(supp_xy, supp_x);
  m.lift = supp_xy / (supp_x * supp_y);
  m.leverage = leverage(supp_xy, supp_x, supp_y);
  m.conviction = conviction(supp_y, m.confidence);
  return m;
}

RuleMetrics rule_metrics_from_counts(SupportCount count_xy, SupportCount count_x, SupportCount count_y,
                                     std::size_t n) {
  if (count_x == 0 || count_y == 0 || n == 0) throw UndefinedRuleError("rule metric over a zero count");
  const double nd = static_cast<double>(n);
  const double xy = count_xy, x = count_x, y = count_y;
  RuleMetrics m;
  m.support = xy / nd;
  m.confidence = xy / x;
  m.lift = (xy * nd) / (x * y);
  m.leverage = m.support - (x / nd) * (y / nd);
  if (count_xy == count_x) {
    m.conviction = count_y == n ? 1.0 : kInfiniteConviction;
  } else {
    m.conviction = (1.0 - y / nd) / (1.0 - m.confidence);
  }
  return m;
}

std::vector<AssociationRule> generate_rules(const SupportTable& table, double min_confidence) {
  const std::size_t n = table.n_transactions();
  const auto count_of = [&](const Itemset& s) {
    const auto c = table.count(s);
    if (!c) throw ConsistencyError("support table is not downward closed");
    return *c;
  };

  std::vector<AssociationRule> rules;
  std::vector<ItemId> left, right;
  for (const auto& [itemset, count_xy] : table.entries()) {
    const std::size_t m = itemset.size();
    if (m < 2) continue;
    if (m >= 63) throw ConsistencyError("itemset too large to enumerate its splits");
    const std::size_t first_rule = rules.size();
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
      left.clear();
      right.clear();
      for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1u ? left : right).push_back(itemset[i]);
      Itemset antecedent(left), consequent(right);
      const auto metrics = rule_metrics_from_counts(count_xy, count_of(antecedent), count_of(consequent), n);
      if (metrics.confidence >= min_confidence)
        rules.push_back({std::move(antecedent), std::move(consequent), metrics});
    }
    std::sort(rules.begin() + static_cast<std::ptrdiff_t>(first_rule), rules.end(),
              [](const AssociationRule& a, const AssociationRule& b) { return a.antecedent < b.antecedent; });
  }
  return rules;
}

void RankingPolicy::validate() const {
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) throw ConfigError("min_confidence must be in [0, 1]");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
}

namespace {

bool name_order(const AssociationRule& a, const AssociationRule& b) {
  if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
  return a.consequent < b.consequent;
}

}  // namespace

bool confidence_order(const AssociationRule& a, const AssociationRule& b) {
  if (a.metrics.confidence != b.metrics.confidence) return a.metrics.confidence > b.metrics.confidence;
  if (a.metrics.lift != b.metrics.lift) return a.metrics.lift > b.metrics.lift;
  return name_order(a, b);
}

bool lift_order(const AssociationRule& a, const AssociationRule& b) {
  if (a.metrics.lift != b.metrics.lift) return a.metrics.lift > b.metrics.lift;
  if (a.metrics.confidence != b.metrics.confidence) return a.metrics.confidence > b.metrics.confidence;
  return name_order(a, b);
}

std::vector<AssociationRule> rank_rules(std::span<const AssociationRule> rules, const RankingPolicy& policy) {
  policy.validate();
  std::vector<AssociationRule> ranked;
  std::copy_if(rules.begin(), rules.end(), std::back_inserter(ranked),
               [&](const AssociationRule& r) { return r.metrics.confidence >= policy.min_confidence; });
  std::sort(ranked.begin(), ranked.end(), confidence_order);
  if (ranked.size() > policy.top_k) ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(policy.top_k), ranked.end());
  std::sort(ranked.begin(), ranked.end(), lift_order);
  return ranked;
}

}  // namespace quakerules
