#include <algorithm>
#include <map>
#include <random>

#include "armae/fpgrowth.hpp"
#include "doctest.h"

using namespace armae;

namespace {

BinaryMatrix toy_matrix() {
    BinaryMatrix m({"A", "B", "C"}, 4);
    m.set(0, 0, true);
    m.set(0, 1, true);
    m.set(1, 0, true);
    m.set(1, 1, true);
    m.set(1, 2, true);
    m.set(2, 0, true);
    m.set(3, 1, true);
    m.set(3, 2, true);
    return m;
}

BinaryMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                           std::size_t items, double density) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < items; ++i) names.push_back("i" + std::to_string(i));
    BinaryMatrix m(std::move(names), rows);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < items; ++i)
            if (unif(rng) < density) m.set(r, static_cast<ItemId>(i), true);
    return m;
}

// exhaustive frequent-itemset enumeration, the independent oracle
std::map<std::vector<ItemId>, double> brute_frequent(const BinaryMatrix& m,
                                                     double min_support,
                                                     std::size_t max_size) {
    std::map<std::vector<ItemId>, double> out;
    const std::size_t n = m.items();
    std::vector<ItemId> combo;
    auto recurse = [&](auto&& self, ItemId start) -> void {
        if (!combo.empty()) {
            std::size_t count = 0;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                bool all = true;
                for (ItemId id : combo)
                    if (!m.at(r, id)) {
                        all = false;
                        break;
                    }
                if (all) ++count;
            }
            const double supp =
                static_cast<double>(count) / static_cast<double>(m.rows());
            if (supp < min_support) return;  // supersets cannot be frequent
            out[combo] = supp;
        }
        if (combo.size() == max_size) return;
        for (ItemId i = start; i < n; ++i) {
            combo.push_back(i);
            self(self, i + 1);
            combo.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

std::map<std::vector<ItemId>, double> as_map(
    const std::vector<FrequentItemset>& v) {
    std::map<std::vector<ItemId>, double> out;
    for (const auto& f : v) out[f.items.items()] = f.support;
    return out;
}

}  // namespace

TEST_CASE("build_tree keeps frequent items only") {
    const BinaryMatrix t = toy_matrix();
    const FPTree tree = build_tree(t, 0.5);
    // A:3, B:3, C:2 over 4 rows, all >= 0.5
    CHECK(tree.header_items().size() == 3);

    const FPTree empty = build_tree(t, 1.0);
    CHECK(empty.header_items().empty());
    CHECK(empty.nodes().size() == 1);  // root only
}

TEST_CASE("build_tree single row is a single path") {
    BinaryMatrix m({"A", "B"}, 1);
    m.set(0, 0, true);
    m.set(0, 1, true);
    const FPTree tree = build_tree(m, 0.5);
    REQUIRE(tree.nodes().size() == 3);
    CHECK(tree.nodes()[1].count == 1);
    CHECK(tree.nodes()[2].count == 1);
    CHECK(tree.nodes()[2].parent == 1);
}

TEST_CASE("header chain counts equal dataset occurrence counts") {
    std::mt19937_64 rng(3);
    const BinaryMatrix m = random_matrix(rng, 80, 9, 0.4);
    const FPTree tree = build_tree(m, 0.2);
    for (ItemId item : tree.header_items()) {
        std::uint64_t chain = 0;
        for (int n = tree.header_head(item); n != -1;
             n = tree.nodes()[n].next_same_item)
            chain += tree.nodes()[n].count;
        std::uint64_t expect = 0;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (m.at(r, item)) ++expect;
        CHECK(chain == expect);
    }
}

TEST_CASE("node count never exceeds parent count") {
    std::mt19937_64 rng(8);
    const BinaryMatrix m = random_matrix(rng, 60, 8, 0.5);
    const FPTree tree = build_tree(m, 0.1);
    for (std::size_t i = 1; i < tree.nodes().size(); ++i) {
        const auto& node = tree.nodes()[i];
        if (node.parent > 0)
            CHECK(node.count <= tree.nodes()[node.parent].count);
    }
}

TEST_CASE("mine_frequent equals brute force on the toy matrix") {
    const BinaryMatrix t = toy_matrix();
    for (double ms : {0.25, 0.5, 0.75}) {
        CAPTURE(ms);
        CHECK(as_map(mine_frequent(t, ms, 3)) == brute_frequent(t, ms, 3));
    }
}

TEST_CASE("mine_frequent equals brute force on random matrices") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 15; ++trial) {
        const BinaryMatrix m = random_matrix(rng, 50, 10, 0.35);
        for (double ms : {0.1, 0.25}) {
            CAPTURE(trial);
            CAPTURE(ms);
            CHECK(as_map(mine_frequent(m, ms, 3)) == brute_frequent(m, ms, 3));
        }
    }
}

TEST_CASE("mine_frequent monotone in min_support, bounded by max_size") {
    std::mt19937_64 rng(29);
    const BinaryMatrix m = random_matrix(rng, 40, 8, 0.4);
    const auto loose = as_map(mine_frequent(m, 0.1, 3));
    const auto tight = as_map(mine_frequent(m, 0.3, 3));
    for (const auto& [items, supp] : tight) {
        auto it = loose.find(items);
        REQUIRE(it != loose.end());
        CHECK(it->second == supp);
    }
    for (const auto& f : mine_frequent(m, 0.1, 1)) CHECK(f.items.size() == 1);
}

TEST_CASE("output independent of row order") {
    std::mt19937_64 rng(31);
    const BinaryMatrix m = random_matrix(rng, 30, 7, 0.4);
    // same multiset of rows in reversed order
    BinaryMatrix rev(m.item_names(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (ItemId i = 0; i < m.items(); ++i)
            rev.set(m.rows() - 1 - r, i, m.at(r, i));
    CHECK(as_map(mine_frequent(m, 0.2, 3)) == as_map(mine_frequent(rev, 0.2, 3)));
}

TEST_CASE("generate_rules matches brute_force_mine on the toy matrix") {
    const BinaryMatrix t = toy_matrix();
    const RuleSet fp = fpgrowth_mine(t, 0.25, 0.5, 2);
    const RuleSet bf = brute_force_mine(t, 0.25, 0.5, 2);
    CHECK(fp.size() == bf.size());
    for (const auto& sr : bf.rules()) CHECK(fp.contains(sr.rule));
}

TEST_CASE("generate_rules confidence equals score_rule recomputation") {
    std::mt19937_64 rng(41);
    const BinaryMatrix m = random_matrix(rng, 64, 9, 0.4);
    const RuleSet fp = fpgrowth_mine(m, 0.1, 0.2, 2);
    for (const auto& sr : fp.rules()) {
        const ScoredRule re = score_rule(m, sr.rule);
        CHECK(sr.support == re.support);
        CHECK(sr.confidence == re.confidence);
    }
}

TEST_CASE("generate_rules edge cases") {
    const BinaryMatrix t = toy_matrix();
    CHECK(fpgrowth_mine(t, 0.25, 1.01, 2).empty());
    // incomplete frequent list signals an error
    auto frequent = mine_frequent(t, 0.25, 3);
    std::erase_if(frequent,
                  [](const FrequentItemset& f) { return f.items.size() == 1; });
    CHECK_THROWS(generate_rules(frequent, t, 0.1, 2));
}
