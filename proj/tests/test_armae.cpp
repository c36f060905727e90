#include <map>
#include <random>

#include "armae/armae.hpp"
#include "doctest.h"

using namespace armae;

TEST_CASE("compute_similarity") {
    CHECK(compute_similarity({}, Itemset({3})) == 0.0);
    CHECK(compute_similarity({Itemset({1, 2})}, Itemset({1, 3})) == 0.5);
    // shorter previous antecedents are skipped
    CHECK(compute_similarity({Itemset({1})}, Itemset({1, 3})) == 0.0);
    CHECK(compute_similarity({Itemset({1, 2}), Itemset({3, 4})},
                             Itemset({3, 4})) == 1.0);
}

TEST_CASE("compute_similarity stays in [0,1]") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<ItemId> pick(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Itemset> prev;
        for (int p = 0; p < 3; ++p)
            prev.push_back(Itemset({pick(rng)}).with(pick(rng)));
        const Itemset candidate = Itemset({pick(rng)}).with(pick(rng));
        const double s = compute_similarity(prev, candidate);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("mine structural invariants") {
    const std::size_t items = 12;
    const AEModel model = init_model(items, 5);
    ArmAeConfig cfg;
    const RuleSet rs = mine(model, items, cfg);
    CHECK(rs.size() <= items * cfg.rules_per_consequent * cfg.max_antecedent);
    std::map<std::pair<ItemId, std::size_t>, std::size_t> per_len;
    for (const auto& sr : rs.rules()) {
        CHECK_FALSE(sr.rule.antecedent.contains(sr.rule.consequent));
        CHECK(sr.rule.antecedent.size() >= 1);
        CHECK(sr.rule.antecedent.size() <= cfg.max_antecedent);
        per_len[{sr.rule.consequent, sr.rule.antecedent.size()}] += 1;
    }
    for (const auto& [_, count] : per_len)
        CHECK(count <= cfg.rules_per_consequent);
}

TEST_CASE("mine with L=0.5, M=2: length-2 antecedents share at most one item") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const std::size_t items = 10;
        const AEModel model = init_model(items, seed);
        const RuleSet rs = mine(model, items, ArmAeConfig{});
        std::map<ItemId, std::vector<Itemset>> length2;
        for (const auto& sr : rs.rules()) {
            if (sr.rule.antecedent.size() == 2)
                length2[sr.rule.consequent].push_back(sr.rule.antecedent);
        }
        for (const auto& [_, ants] : length2) {
            for (std::size_t i = 0; i < ants.size(); ++i) {
                for (std::size_t j = i + 1; j < ants.size(); ++j) {
                    std::size_t shared = 0;
                    for (ItemId id : ants[i].items())
                        if (ants[j].contains(id)) ++shared;
                    CHECK(shared <= 1);
                }
            }
        }
    }
}

TEST_CASE("mine N=1, M=1 picks the argmax excluding the consequent") {
    const std::size_t items = 8;
    const AEModel model = init_model(items, 3);
    ArmAeConfig cfg;
    cfg.rules_per_consequent = 1;
    cfg.max_antecedent = 1;
    const RuleSet rs = mine(model, items, cfg);
    CHECK(rs.size() == items);
    for (const auto& sr : rs.rules()) {
        std::vector<double> input(items, 0.0);
        input[sr.rule.consequent] = 1.0;
        const auto out = forward(model, input);
        ItemId best = sr.rule.consequent == 0 ? 1 : 0;
        for (ItemId i = 0; i < items; ++i) {
            if (i == sr.rule.consequent) continue;
            if (out[i] > out[best]) best = i;
        }
        REQUIRE(sr.rule.antecedent.size() == 1);
        CHECK(sr.rule.antecedent.items()[0] == best);
    }
}

TEST_CASE("mine is deterministic and honors the consequent filter") {
    const std::size_t items = 9;
    const AEModel model = init_model(items, 44);
    ArmAeConfig cfg;
    cfg.consequent_filter = std::vector<ItemId>{2, 5};
    const RuleSet a = mine(model, items, cfg);
    const RuleSet b = mine(model, items, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.rules()[i].rule == b.rules()[i].rule);
    for (const auto& sr : a.rules())
        CHECK((sr.rule.consequent == 2 || sr.rule.consequent == 5));

    cfg.consequent_filter = std::vector<ItemId>{};
    CHECK(mine(model, items, cfg).empty());
}

TEST_CASE("mine records a trace") {
    const std::size_t items = 6;
    const AEModel model = init_model(items, 2);
    MiningTrace trace;
    const RuleSet rs = mine(model, items, ArmAeConfig{}, &trace);
    CHECK(!trace.steps.empty());
    std::size_t chosen = 0;
    for (const auto& s : trace.steps)
        if (s.chosen) ++chosen;
    CHECK(chosen >= rs.size());  // duplicates may be dropped at insertion
}

TEST_CASE("full_pipeline recovers a strongly planted pair") {
    SyntheticSpec spec;
    spec.rows = 1000;
    spec.items = 12;
    spec.planted_pairs = {{1, 7, 0.9}};
    spec.background_density = 0.1;

    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = 1000 + seed;
        const BinaryMatrix data = generate_synthetic(spec);
        TrainConfig tc;
        tc.seed = seed;
        tc.loss_delta_threshold = 1e-4;
        tc.max_epochs = 15;
        const PipelineResult res = full_pipeline(data, tc, ArmAeConfig{});
        bool found = false;
        for (const auto& sr : res.rules.rules()) {
            const bool fwd = sr.rule.consequent == 7 && sr.rule.antecedent.contains(1);
            const bool rev = sr.rule.consequent == 1 && sr.rule.antecedent.contains(7);
            if (fwd || rev) found = true;
        }
        if (found) ++hits;
    }
    CHECK(hits >= 6);
}
