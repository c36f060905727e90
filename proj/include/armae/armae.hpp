#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "armae/autoencoder.hpp"
#include "armae/rules.hpp"

namespace armae {

struct ArmAeConfig {
    std::size_t rules_per_consequent = 2;  // N
    std::size_t max_antecedent = 2;        // M
    double similarity_threshold = 0.5;     // L
    std::optional<std::vector<ItemId>> consequent_filter;  // default: all items
};

struct MiningTrace {
    struct Step {
        ItemId consequent;
        std::size_t rule_index;   // 0..N-1
        std::size_t growth_step;  // 0..M-1
        std::optional<ItemId> chosen;
        std::vector<std::pair<ItemId, std::string>> rejections;
    };
    std::vector<Step> steps;
};

// Maximum overlap between the candidate and each previous antecedent at
// least as long as it, as a fraction of that antecedent's length.
double compute_similarity(const std::vector<Itemset>& previous_antecedents,
                          const Itemset& candidate);

// Rule extraction from a trained model; output rules are unscored.
RuleSet mine(const AEModel& model, std::size_t data_item_count,
             const ArmAeConfig& cfg, MiningTrace* trace = nullptr);

struct PipelineResult {
    RuleSet rules;  // scored
    std::size_t epochs_run = 0;
    double seconds = 0.0;
};

PipelineResult full_pipeline(const BinaryMatrix& data, const TrainConfig& train_cfg,
                             const ArmAeConfig& mine_cfg,
                             MiningTrace* trace = nullptr);

void write_trace_json(std::ostream& out, const MiningTrace& trace,
                      const std::vector<std::string>& item_names);

}  // namespace armae
