#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "quakerules/miner.hpp"

namespace quakerules {

inline constexpr double kInfiniteConviction = std::numeric_limits<double>::infinity();

struct RuleMetrics {
  double support = 0.0;  // support of antecedent and consequent together
  double confidence = 0.0;
  double lift = 0.0;
  double leverage = 0.0;
  double conviction = 0.0;  // kInfiniteConviction when confidence is 1
};

struct AssociationRule {
  Itemset antecedent;
  Itemset consequent;
  RuleMetrics metrics;
};

// Metric formulas over support fractions.

/// supp_xy / supp_x. Throws UndefinedRuleError when supp_x is not positive.
double confidence(double supp_xy, double supp_x);
/// conf / supp_y. Throws UndefinedRuleError when supp_y is not positive.
double lift(double conf, double supp_y);
double leverage(double supp_xy, double supp_x, double supp_y);
/// (1 - supp_y) / (1 - conf); +inf at conf = 1 unless supp_y = 1, where the
/// independence limit 1 is returned.
double conviction(double supp_y, double conf);

/// All five metrics from supports. Lift is evaluated as
/// supp_xy / (supp_x * supp_y), which is exactly symmetric in X and Y.
RuleMetrics rule_metrics(double supp_xy, double supp_x, double supp_y);

/// Same metrics from exact transaction counts over `n` transactions.
/// Confidence and lift come from integer ratios, so the rule X -> Y and its
/// mirror agree bit for bit on lift and leverage.
RuleMetrics rule_metrics_from_counts(SupportCount count_xy, SupportCount count_x, SupportCount count_y,
                                     std::size_t n);

/// Every split X -> Z\X of every frequent itemset Z with |Z| >= 2 whose
/// confidence reaches `min_confidence`. Output is ordered by (Z, X).
/// Throws ConsistencyError if a needed subset is absent from the table.
std::vector<AssociationRule> generate_rules(const SupportTable& table, double min_confidence);

struct RankingPolicy {
  double min_confidence = 0.25;
  std::size_t top_k = 30;

  void validate() const;
};

/// Two-step table convention: keep the top_k rules by confidence, then
/// order the kept rules by lift. Both steps break ties with the other metric
/// and then by antecedent and consequent name order (ids follow name order).
/// Rules below min_confidence are discarded first.
std::vector<AssociationRule> rank_rules(std::span<const AssociationRule> rules, const RankingPolicy& policy);

/// Selection order: confidence desc, lift desc, antecedent asc, consequent asc.
bool confidence_order(const AssociationRule& a, const AssociationRule& b);
/// Display order: lift desc, confidence desc, antecedent asc, consequent asc.
bool lift_order(const AssociationRule& a, const AssociationRule& b);

}  // namespace quakerules
