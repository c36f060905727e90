#include "armae/fpgrowth.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "armae/kernels.hpp"

namespace armae {
namespace {

// descending count, ties ascending item id
std::vector<ItemId> rank_items(const std::map<ItemId, std::uint64_t>& counts) {
    std::vector<ItemId> items;
    items.reserve(counts.size());
    for (const auto& [id, _] : counts) items.push_back(id);
    std::stable_sort(items.begin(), items.end(), [&](ItemId a, ItemId b) {
        const auto ca = counts.at(a), cb = counts.at(b);
        if (ca != cb) return ca > cb;
        return a < b;
    });
    return items;
}

void mine_tree(const FPTree& tree, double min_support, std::size_t max_size,
               const std::vector<ItemId>& suffix,
               std::vector<FrequentItemset>& out) {
    const double total = static_cast<double>(tree.total_rows());
    const auto& header = tree.header_items();
    // least-frequent first
    for (auto it = header.rbegin(); it != header.rend(); ++it) {
        const ItemId item = *it;
        std::uint64_t count = 0;
        for (int n = tree.header_head(item); n != -1;
             n = tree.nodes()[n].next_same_item)
            count += tree.nodes()[n].count;
        const double support = static_cast<double>(count) / total;
        if (support < min_support) continue;

        std::vector<ItemId> itemset = suffix;
        itemset.push_back(item);
        out.push_back({Itemset(itemset), support});
        if (itemset.size() >= max_size) continue;

        // conditional pattern base: prefix paths with this node's count
        std::vector<std::pair<std::vector<ItemId>, std::uint64_t>> base;
        std::map<ItemId, std::uint64_t> cond_counts;
        for (int n = tree.header_head(item); n != -1;
             n = tree.nodes()[n].next_same_item) {
            std::vector<ItemId> path;
            for (int p = tree.nodes()[n].parent; p > 0; p = tree.nodes()[p].parent)
                path.push_back(tree.nodes()[p].item);
            if (path.empty()) continue;
            const std::uint64_t c = tree.nodes()[n].count;
            for (ItemId id : path) cond_counts[id] += c;
            base.emplace_back(std::move(path), c);
        }
        for (auto cit = cond_counts.begin(); cit != cond_counts.end();) {
            if (static_cast<double>(cit->second) / total < min_support)
                cit = cond_counts.erase(cit);
            else
                ++cit;
        }
        if (cond_counts.empty()) continue;

        FPTree cond(tree.total_rows());
        std::vector<ItemId> ranked = rank_items(cond_counts);
        std::map<ItemId, std::size_t> rank;
        for (std::size_t i = 0; i < ranked.size(); ++i) rank[ranked[i]] = i;
        cond.set_header(std::move(ranked));
        for (auto& [path, c] : base) {
            std::vector<ItemId> kept;
            for (ItemId id : path) {
                if (cond_counts.count(id)) kept.push_back(id);
            }
            if (kept.empty()) continue;
            std::sort(kept.begin(), kept.end(), [&](ItemId a, ItemId b) {
                return rank.at(a) < rank.at(b);
            });
            cond.insert(kept, c);
        }
        mine_tree(cond, min_support, max_size, itemset, out);
    }
}

}  // namespace

FPTree::FPTree(std::size_t total_rows) : total_rows_(total_rows) {
    nodes_.push_back(Node{});  // root
}

void FPTree::set_header(std::vector<ItemId> items_by_rank) {
    header_items_ = std::move(items_by_rank);
}

int FPTree::header_head(ItemId item) const {
    auto it = header_head_.find(item);
    return it == header_head_.end() ? -1 : it->second;
}

void FPTree::insert(const std::vector<ItemId>& items, std::uint64_t count) {
    int cur = 0;
    for (ItemId item : items) {
        auto it = nodes_[cur].children.find(item);
        if (it == nodes_[cur].children.end()) {
            const int idx = static_cast<int>(nodes_.size());
            Node node;
            node.item = item;
            node.parent = cur;
            nodes_.push_back(std::move(node));
            nodes_[cur].children.emplace(item, idx);
            auto tail = header_tail_.find(item);
            if (tail == header_tail_.end()) {
                header_head_[item] = idx;
            } else {
                nodes_[tail->second].next_same_item = idx;
            }
            header_tail_[item] = idx;
            cur = idx;
        } else {
            cur = it->second;
        }
        nodes_[cur].count += count;
    }
}

FPTree build_tree(const BinaryMatrix& data, double min_support) {
    if (min_support <= 0.0 || min_support > 1.0)
        throw std::invalid_argument("build_tree: min_support in (0,1] required");
    const auto& k = kern::active();
    const double rows = static_cast<double>(data.rows());

    std::map<ItemId, std::uint64_t> counts;
    for (ItemId i = 0; i < data.items(); ++i) {
        auto col = data.column_bits(i);
        const std::uint64_t c = k.popcount(col.data(), col.size());
        if (static_cast<double>(c) / rows >= min_support) counts[i] = c;
    }

    FPTree tree(data.rows());
    std::vector<ItemId> ranked = rank_items(counts);
    std::map<ItemId, std::size_t> rank;
    for (std::size_t i = 0; i < ranked.size(); ++i) rank[ranked[i]] = i;
    tree.set_header(std::move(ranked));

    std::vector<ItemId> row_items;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        row_items.clear();
        for (const auto& [id, _] : counts) {
            if (data.at(r, id)) row_items.push_back(id);
        }
        std::sort(row_items.begin(), row_items.end(), [&](ItemId a, ItemId b) {
            return rank.at(a) < rank.at(b);
        });
        if (!row_items.empty()) tree.insert(row_items, 1);
    }
    return tree;
}

std::vector<FrequentItemset> mine_frequent(const FPTree& tree, double min_support,
                                           std::size_t max_size) {
    std::vector<FrequentItemset> out;
    mine_tree(tree, min_support, max_size, {}, out);
    std::sort(out.begin(), out.end(), [](const FrequentItemset& a,
                                         const FrequentItemset& b) {
        return a.items < b.items;
    });
    return out;
}

std::vector<FrequentItemset> mine_frequent(const BinaryMatrix& data,
                                           double min_support,
                                           std::size_t max_size) {
    return mine_frequent(build_tree(data, min_support), min_support, max_size);
}

RuleSet generate_rules(const std::vector<FrequentItemset>& frequent,
                       const BinaryMatrix& data, double min_confidence,
                       std::size_t max_antecedent) {
    (void)data;  // supports come from the frequent-itemset table, not a rescan
    std::map<std::vector<ItemId>, double> support_of;
    for (const auto& f : frequent) support_of[f.items.items()] = f.support;

    RuleSet out;
    for (const auto& f : frequent) {
        const std::size_t sz = f.items.size();
        if (sz < 2 || sz > max_antecedent + 1) continue;
        for (ItemId consequent : f.items.items()) {
            std::vector<ItemId> antecedent;
            for (ItemId id : f.items.items()) {
                if (id != consequent) antecedent.push_back(id);
            }
            auto it = support_of.find(antecedent);
            if (it == support_of.end())
                throw std::runtime_error(
                    "generate_rules: frequent list is missing a subset support");
            const double conf = f.support / it->second;
            if (conf >= min_confidence) {
                ScoredRule sr;
                sr.rule = Rule{Itemset(antecedent), consequent};
                sr.support = f.support;
                sr.confidence = conf;
                out.insert(std::move(sr));
            }
        }
    }
    return out;
}

RuleSet fpgrowth_mine(const BinaryMatrix& data, double min_support,
                      double min_confidence, std::size_t max_antecedent) {
    auto frequent = mine_frequent(data, min_support, max_antecedent + 1);
    return generate_rules(frequent, data, min_confidence, max_antecedent);
}

}  // namespace armae
