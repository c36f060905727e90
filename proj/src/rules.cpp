#include "armae/rules.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "armae/kernels.hpp"
#include "json.hpp"

namespace armae {
namespace {

std::uint64_t itemset_count(const BinaryMatrix& data,
                            const std::vector<ItemId>& items) {
    const auto& k = kern::active();
    if (items.empty()) return data.rows();
    for (ItemId id : items) {
        if (id >= data.items()) throw std::out_of_range("invalid ItemId");
    }
    if (items.size() == 1) {
        auto col = data.column_bits(items[0]);
        return k.popcount(col.data(), col.size());
    }
    if (items.size() == 2) {
        auto a = data.column_bits(items[0]);
        auto b = data.column_bits(items[1]);
        return k.and_popcount(a.data(), b.data(), a.size());
    }
    auto first = data.column_bits(items[0]);
    std::vector<std::uint64_t> acc(first.begin(), first.end());
    for (std::size_t i = 1; i < items.size(); ++i) {
        auto col = data.column_bits(items[i]);
        k.and_inplace(acc.data(), col.data(), acc.size());
    }
    return k.popcount(acc.data(), acc.size());
}

}  // namespace

Itemset::Itemset(std::vector<ItemId> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool Itemset::contains(ItemId id) const {
    return std::binary_search(items_.begin(), items_.end(), id);
}

Itemset Itemset::with(ItemId id) const {
    Itemset out = *this;
    auto pos = std::lower_bound(out.items_.begin(), out.items_.end(), id);
    if (pos == out.items_.end() || *pos != id) out.items_.insert(pos, id);
    return out;
}

bool RuleSet::insert(ScoredRule r) {
    if (!index_.insert(r.rule).second) return false;
    rules_.push_back(std::move(r));
    return true;
}

bool RuleSet::contains(const Rule& r) const { return index_.count(r) != 0; }

double itemset_support(const BinaryMatrix& data, const Itemset& s) {
    return static_cast<double>(itemset_count(data, s.items())) /
           static_cast<double>(data.rows());
}

ScoredRule score_rule(const BinaryMatrix& data, const Rule& r) {
    if (r.antecedent.empty())
        throw std::invalid_argument("rule antecedent must be non-empty");
    if (r.antecedent.contains(r.consequent))
        throw std::invalid_argument("consequent must not appear in antecedent");
    const double ant = itemset_support(data, r.antecedent);
    const double both = itemset_support(data, r.antecedent.with(r.consequent));
    ScoredRule out;
    out.rule = r;
    out.support = both;
    out.confidence = ant > 0.0 ? both / ant : 0.0;
    return out;
}

RuleSet score_rules(const BinaryMatrix& data, const RuleSet& rs) {
    RuleSet out;
    for (const auto& sr : rs.rules()) out.insert(score_rule(data, sr.rule));
    return out;
}

double coverage(const RuleSet& candidate, const RuleSet& reference) {
    if (reference.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& sr : reference.rules()) {
        if (candidate.contains(sr.rule)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(reference.size());
}

RuleSetSummary summarize(const RuleSet& rs) {
    RuleSetSummary s;
    s.count = rs.size();
    if (rs.empty()) return s;
    std::size_t positive = 0;
    for (const auto& sr : rs.rules()) {
        s.avg_support += sr.support;
        s.avg_confidence += sr.confidence;
        if (sr.support > 0.0) ++positive;
    }
    s.avg_support /= static_cast<double>(s.count);
    s.avg_confidence /= static_cast<double>(s.count);
    s.fraction_support_positive =
        static_cast<double>(positive) / static_cast<double>(s.count);
    return s;
}

RuleSet brute_force_mine(const BinaryMatrix& data, double min_support,
                         double min_confidence, std::size_t max_antecedent) {
    if (data.items() > 20)
        throw std::invalid_argument("brute_force_mine guard: items <= 20");
    const std::size_t n = data.items();
    RuleSet out;

    std::vector<ItemId> combo;
    auto emit_rules = [&](const std::vector<ItemId>& antecedent) {
        const std::uint64_t cant = itemset_count(data, antecedent);
        if (cant == 0) return;
        const double supp_ant =
            static_cast<double>(cant) / static_cast<double>(data.rows());
        for (ItemId c = 0; c < n; ++c) {
            if (std::binary_search(antecedent.begin(), antecedent.end(), c))
                continue;
            std::vector<ItemId> full = antecedent;
            full.insert(std::lower_bound(full.begin(), full.end(), c), c);
            const double supp =
                static_cast<double>(itemset_count(data, full)) /
                static_cast<double>(data.rows());
            const double conf = supp / supp_ant;
            if (supp >= min_support && conf >= min_confidence) {
                ScoredRule sr;
                sr.rule = Rule{Itemset(antecedent), c};
                sr.support = supp;
                sr.confidence = conf;
                out.insert(std::move(sr));
            }
        }
    };

    auto recurse = [&](auto&& self, ItemId start) -> void {
        if (!combo.empty()) emit_rules(combo);
        if (combo.size() == max_antecedent) return;
        for (ItemId i = start; i < n; ++i) {
            combo.push_back(i);
            self(self, i + 1);
            combo.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

void write_rules_jsonl(std::ostream& out, const RuleSet& rs,
                       const std::vector<std::string>& item_names) {
    for (const auto& sr : rs.rules()) {
        nlohmann::ordered_json j;
        auto ants = nlohmann::ordered_json::array();
        for (ItemId id : sr.rule.antecedent.items()) ants.push_back(item_names.at(id));
        j["antecedent"] = std::move(ants);
        j["consequent"] = item_names.at(sr.rule.consequent);
        j["support"] = sr.support;
        j["confidence"] = sr.confidence;
        out << j.dump() << '\n';
    }
}

RuleSet read_rules_jsonl(std::istream& in,
                         const std::vector<std::string>& item_names) {
    std::unordered_map<std::string, ItemId> ids;
    for (std::size_t i = 0; i < item_names.size(); ++i)
        ids.emplace(item_names[i], static_cast<ItemId>(i));
    RuleSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        std::vector<ItemId> ants;
        for (const auto& name : j.at("antecedent")) {
            auto it = ids.find(name.get<std::string>());
            if (it == ids.end())
                throw std::runtime_error("unknown item: " + name.get<std::string>());
            ants.push_back(it->second);
        }
        auto cit = ids.find(j.at("consequent").get<std::string>());
        if (cit == ids.end())
            throw std::runtime_error("unknown item: " +
                                     j.at("consequent").get<std::string>());
        ScoredRule sr;
        sr.rule = Rule{Itemset(std::move(ants)), cit->second};
        sr.support = j.value("support", 0.0);
        sr.confidence = j.value("confidence", 0.0);
        out.insert(std::move(sr));
    }
    return out;
}

void write_rules_csv(std::ostream& out, const RuleSet& rs,
                     const std::vector<std::string>& item_names) {
    out << "antecedent,consequent,support,confidence\n";
    for (const auto& sr : rs.rules()) {
        std::string ants;
        for (ItemId id : sr.rule.antecedent.items()) {
            if (!ants.empty()) ants.push_back(';');
            ants += item_names.at(id);
        }
        nlohmann::json supp = sr.support, conf = sr.confidence;
        out << ants << ',' << item_names.at(sr.rule.consequent) << ','
            << supp.dump() << ',' << conf.dump() << '\n';
    }
}

}  // namespace armae
