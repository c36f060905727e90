#pragma once

#include <compare>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "armae/dataset.hpp"

namespace armae {

// Sorted, duplicate-free set of items. May be empty only as an intermediate
// antecedent while a rule is being grown.
class Itemset {
public:
    Itemset() = default;
    explicit Itemset(std::vector<ItemId> items);

    const std::vector<ItemId>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    bool contains(ItemId id) const;
    Itemset with(ItemId id) const;  // copy + insert, keeps order

    auto operator<=>(const Itemset&) const = default;

private:
    std::vector<ItemId> items_;
};

struct Rule {
    Itemset antecedent;  // non-empty
    ItemId consequent;

    auto operator<=>(const Rule&) const = default;
};

struct ScoredRule {
    Rule rule;
    double support = 0.0;
    double confidence = 0.0;
};

// Ordered rule container; duplicate (antecedent, consequent) pairs rejected.
class RuleSet {
public:
    bool insert(ScoredRule r);  // false if duplicate
    bool contains(const Rule& r) const;

    const std::vector<ScoredRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }

private:
    std::vector<ScoredRule> rules_;
    std::set<Rule> index_;
};

struct RuleSetSummary {
    double avg_support = 0.0;
    double avg_confidence = 0.0;
    std::size_t count = 0;
    double fraction_support_positive = 0.0;
};

double itemset_support(const BinaryMatrix& data, const Itemset& s);
ScoredRule score_rule(const BinaryMatrix& data, const Rule& r);
RuleSet score_rules(const BinaryMatrix& data, const RuleSet& rs);

// Fraction of reference rules also present in candidate (rule identity only).
double coverage(const RuleSet& candidate, const RuleSet& reference);
RuleSetSummary summarize(const RuleSet& rs);

// Exhaustive miner for small instances; guard: items <= 20.
RuleSet brute_force_mine(const BinaryMatrix& data, double min_support,
                         double min_confidence, std::size_t max_antecedent);

// JSON-lines: one object per rule with antecedent/consequent item names.
void write_rules_jsonl(std::ostream& out, const RuleSet& rs,
                       const std::vector<std::string>& item_names);
RuleSet read_rules_jsonl(std::istream& in,
                         const std::vector<std::string>& item_names);
void write_rules_csv(std::ostream& out, const RuleSet& rs,
                     const std::vector<std::string>& item_names);

}  // namespace armae
