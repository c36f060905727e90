#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "armae/rules.hpp"

namespace armae {

struct FrequentItemset {
    Itemset items;
    double support = 0.0;
};

// Prefix tree over frequent items, nodes held in a flat vector (index links).
class FPTree {
public:
    struct Node {
        ItemId item = 0;
        std::uint64_t count = 0;
        int parent = -1;
        int next_same_item = -1;  // header chain
        std::map<ItemId, int> children;
    };

    explicit FPTree(std::size_t total_rows);

    // items must already be filtered to frequent ones and sorted by rank
    void insert(const std::vector<ItemId>& items, std::uint64_t count);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<ItemId>& header_items() const { return header_items_; }
    int header_head(ItemId item) const;
    std::size_t total_rows() const { return total_rows_; }

    // ascending by global frequency rank; set by build_tree / conditional builds
    void set_header(std::vector<ItemId> items_by_rank);

private:
    std::vector<Node> nodes_;  // nodes_[0] is the root
    std::vector<ItemId> header_items_;
    std::map<ItemId, int> header_head_;
    std::map<ItemId, int> header_tail_;
    std::size_t total_rows_;
};

FPTree build_tree(const BinaryMatrix& data, double min_support);

std::vector<FrequentItemset> mine_frequent(const FPTree& tree, double min_support,
                                           std::size_t max_size);
std::vector<FrequentItemset> mine_frequent(const BinaryMatrix& data,
                                           double min_support,
                                           std::size_t max_size);

RuleSet generate_rules(const std::vector<FrequentItemset>& frequent,
                       const BinaryMatrix& data, double min_confidence,
                       std::size_t max_antecedent);

RuleSet fpgrowth_mine(const BinaryMatrix& data, double min_support,
                      double min_confidence, std::size_t max_antecedent);

}  // namespace armae
