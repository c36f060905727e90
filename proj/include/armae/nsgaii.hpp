#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "armae/rules.hpp"

namespace armae {

// Candidate rule: up to two antecedent items plus one consequent.
struct Individual {
    std::array<std::optional<ItemId>, 2> antecedent_slots;
    ItemId consequent = 0;
    double support = 0.0;
    double confidence = 0.0;

    Rule to_rule() const;
    bool valid(std::size_t item_count) const;
};

struct NsgaConfig {
    std::size_t population = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.01;
    std::size_t archive_capacity = 300;
    double improvement_threshold = 0.01;
    std::uint64_t seed = 0;
    std::size_t max_generations = 500;
};

using Objectives = std::pair<double, double>;  // (support, confidence)

// Returns fronts of indices; front 0 holds the non-dominated individuals.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<Objectives>& objectives);

std::vector<double> crowding_distance(const std::vector<Objectives>& front);

struct GenerationLog {
    std::size_t generation = 0;
    double archive_avg_support = 0.0;
    double archive_avg_confidence = 0.0;
    std::size_t archive_size = 0;
};

struct EvolveResult {
    RuleSet archive;
    std::size_t generations = 0;
    std::vector<GenerationLog> log;
};

EvolveResult evolve(const BinaryMatrix& data, const NsgaConfig& cfg);

}  // namespace armae
