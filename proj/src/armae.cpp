#include "armae/armae.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace armae {

double compute_similarity(const std::vector<Itemset>& previous_antecedents,
                          const Itemset& candidate) {
    double best = 0.0;
    for (const auto& prev : previous_antecedents) {
        if (prev.size() < candidate.size()) continue;  // shorter rules skipped
        std::size_t overlap = 0;
        for (ItemId id : prev.items()) {
            if (candidate.contains(id)) ++overlap;
        }
        best = std::max(best, static_cast<double>(overlap) /
                                  static_cast<double>(prev.size()));
    }
    return best;
}

RuleSet mine(const AEModel& model, std::size_t data_item_count,
             const ArmAeConfig& cfg, MiningTrace* trace) {
    if (model.width() != data_item_count)
        throw std::invalid_argument("mine: model width != item count");
    const std::size_t n_items = data_item_count;

    std::vector<ItemId> consequents;
    if (cfg.consequent_filter) {
        consequents = *cfg.consequent_filter;
    } else {
        consequents.resize(n_items);
        std::iota(consequents.begin(), consequents.end(), ItemId{0});
    }

    RuleSet rules;
    std::vector<double> input(n_items);
    std::vector<ItemId> order(n_items);
    for (ItemId consequent : consequents) {
        if (consequent >= n_items) throw std::out_of_range("invalid consequent");
        std::vector<Itemset> found;  // antecedents already kept for this consequent
        for (std::size_t i = 0; i < cfg.rules_per_consequent; ++i) {
            Itemset antecedent;
            for (std::size_t j = 0; j < cfg.max_antecedent; ++j) {
                std::fill(input.begin(), input.end(), 0.0);
                input[consequent] = 1.0;
                for (ItemId id : antecedent.items()) input[id] = 1.0;
                const std::vector<double> scores = forward(model, input);

                // descending score, ties by ascending item id
                std::iota(order.begin(), order.end(), ItemId{0});
                std::stable_sort(order.begin(), order.end(),
                                 [&](ItemId a, ItemId b) {
                                     return scores[a] > scores[b];
                                 });

                MiningTrace::Step step;
                step.consequent = consequent;
                step.rule_index = i;
                step.growth_step = j;

                std::optional<ItemId> chosen;
                Itemset grown;
                for (ItemId item : order) {
                    if (item == consequent) {
                        if (trace) step.rejections.emplace_back(item, "consequent");
                        continue;
                    }
                    if (antecedent.contains(item)) {
                        if (trace) step.rejections.emplace_back(item, "in-antecedent");
                        continue;
                    }
                    Itemset candidate = antecedent.with(item);
                    if (compute_similarity(found, candidate) >
                        cfg.similarity_threshold) {
                        if (trace) step.rejections.emplace_back(item, "similarity");
                        continue;
                    }
                    chosen = item;
                    grown = std::move(candidate);
                    break;
                }
                if (trace) {
                    step.chosen = chosen;
                    trace->steps.push_back(std::move(step));
                }
                if (!chosen) break;  // filter exhaustion: keep shorter prefixes
                antecedent = std::move(grown);
                found.push_back(antecedent);
                rules.insert(ScoredRule{Rule{antecedent, consequent}, 0.0, 0.0});
            }
        }
    }
    return rules;
}

PipelineResult full_pipeline(const BinaryMatrix& data, const TrainConfig& train_cfg,
                             const ArmAeConfig& mine_cfg, MiningTrace* trace) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [model, epochs] = train_until_plateau(data, train_cfg);
    RuleSet mined = mine(model, data.items(), mine_cfg, trace);
    RuleSet scored = score_rules(data, mined);
    const auto t1 = std::chrono::steady_clock::now();
    PipelineResult result;
    result.rules = std::move(scored);
    result.epochs_run = epochs;
    result.seconds = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

void write_trace_json(std::ostream& out, const MiningTrace& trace,
                      const std::vector<std::string>& item_names) {
    auto steps = nlohmann::ordered_json::array();
    for (const auto& s : trace.steps) {
        nlohmann::ordered_json j;
        j["consequent"] = item_names.at(s.consequent);
        j["rule_index"] = s.rule_index;
        j["growth_step"] = s.growth_step;
        j["chosen"] = s.chosen ? nlohmann::ordered_json(item_names.at(*s.chosen))
                               : nlohmann::ordered_json(nullptr);
        auto rej = nlohmann::ordered_json::array();
        for (const auto& [item, reason] : s.rejections)
            rej.push_back({{"item", item_names.at(item)}, {"reason", reason}});
        j["rejections"] = std::move(rej);
        steps.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["steps"] = std::move(steps);
    out << root.dump(2) << '\n';
}

}  // namespace armae
