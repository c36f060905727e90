#include "armae/nsgaii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace armae {
namespace {

bool dominates(const Objectives& a, const Objectives& b) {
    return a.first >= b.first && a.second >= b.second &&
           (a.first > b.first || a.second > b.second);
}

struct RankedPop {
    std::vector<std::size_t> rank;      // per individual
    std::vector<double> crowding;       // per individual
    std::vector<std::vector<std::size_t>> fronts;
};

RankedPop rank_population(const std::vector<Objectives>& objectives) {
    RankedPop r;
    r.fronts = fast_non_dominated_sort(objectives);
    r.rank.assign(objectives.size(), 0);
    r.crowding.assign(objectives.size(), 0.0);
    for (std::size_t f = 0; f < r.fronts.size(); ++f) {
        std::vector<Objectives> front_obj;
        for (std::size_t idx : r.fronts[f]) {
            r.rank[idx] = f;
            front_obj.push_back(objectives[idx]);
        }
        const auto dist = crowding_distance(front_obj);
        for (std::size_t i = 0; i < r.fronts[f].size(); ++i)
            r.crowding[r.fronts[f][i]] = dist[i];
    }
    return r;
}

ItemId random_item(std::mt19937_64& rng, std::size_t item_count) {
    return static_cast<ItemId>(
        std::uniform_int_distribution<std::size_t>(0, item_count - 1)(rng));
}

void repair(Individual& ind, std::size_t item_count, std::mt19937_64& rng) {
    if (item_count < 3) ind.antecedent_slots[1].reset();
    if (!ind.antecedent_slots[0] && !ind.antecedent_slots[1])
        ind.antecedent_slots[0] = random_item(rng, item_count);
    if (!ind.antecedent_slots[0] && ind.antecedent_slots[1])
        std::swap(ind.antecedent_slots[0], ind.antecedent_slots[1]);
    // resample offending genes until slots are distinct and avoid the consequent
    while (*ind.antecedent_slots[0] == ind.consequent)
        ind.antecedent_slots[0] = random_item(rng, item_count);
    if (ind.antecedent_slots[1]) {
        while (*ind.antecedent_slots[1] == ind.consequent ||
               *ind.antecedent_slots[1] == *ind.antecedent_slots[0])
            ind.antecedent_slots[1] = random_item(rng, item_count);
    }
}

Individual random_individual(std::mt19937_64& rng, std::size_t item_count) {
    Individual ind;
    ind.consequent = random_item(rng, item_count);
    ind.antecedent_slots[0] = random_item(rng, item_count);
    if (item_count >= 3 && std::uniform_int_distribution<int>(0, 1)(rng))
        ind.antecedent_slots[1] = random_item(rng, item_count);
    repair(ind, item_count, rng);
    return ind;
}

void evaluate(Individual& ind, const BinaryMatrix& data) {
    const ScoredRule sr = score_rule(data, ind.to_rule());
    ind.support = sr.support;
    ind.confidence = sr.confidence;
}

std::vector<Objectives> objectives_of(const std::vector<Individual>& pop) {
    std::vector<Objectives> obj;
    obj.reserve(pop.size());
    for (const auto& ind : pop) obj.emplace_back(ind.support, ind.confidence);
    return obj;
}

std::size_t tournament(const RankedPop& ranked, std::mt19937_64& rng,
                       std::size_t pop_size) {
    std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (ranked.rank[a] != ranked.rank[b])
        return ranked.rank[a] < ranked.rank[b] ? a : b;
    return ranked.crowding[a] >= ranked.crowding[b] ? a : b;
}

}  // namespace

Rule Individual::to_rule() const {
    std::vector<ItemId> ants;
    for (const auto& slot : antecedent_slots) {
        if (slot) ants.push_back(*slot);
    }
    return Rule{Itemset(std::move(ants)), consequent};
}

bool Individual::valid(std::size_t item_count) const {
    if (!antecedent_slots[0] && !antecedent_slots[1]) return false;
    for (const auto& slot : antecedent_slots) {
        if (slot && (*slot >= item_count || *slot == consequent)) return false;
    }
    if (antecedent_slots[0] && antecedent_slots[1] &&
        *antecedent_slots[0] == *antecedent_slots[1])
        return false;
    return consequent < item_count;
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<Objectives>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j]))
                dominated_by[i].push_back(j);
            else if (dominates(objectives[j], objectives[i]))
                ++domination_count[i];
        }
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Objectives>& front) {
    const std::size_t n = front.size();
    if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);

    for (int obj = 0; obj < 2; ++obj) {
        auto value = [&](std::size_t i) {
            return obj == 0 ? front[i].first : front[i].second;
        };
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return value(a) < value(b);
                         });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double span = value(order.back()) - value(order.front());
        if (span <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (std::isinf(dist[order[i]])) continue;
            dist[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / span;
        }
    }
    return dist;
}

EvolveResult evolve(const BinaryMatrix& data, const NsgaConfig& cfg) {
    if (cfg.population < 4 || cfg.population % 2 != 0)
        throw std::invalid_argument("evolve: population must be even and >= 4");
    if (data.items() < 2)
        throw std::invalid_argument("evolve: need at least 2 items");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t item_count = data.items();

    std::vector<Individual> pop;
    for (std::size_t i = 0; i < cfg.population; ++i) {
        pop.push_back(random_individual(rng, item_count));
        evaluate(pop.back(), data);
    }

    // archive entries keep insertion-order ties deterministic via rule order
    std::vector<ScoredRule> archive;
    std::set<Rule> archive_index;

    auto merge_archive = [&](const std::vector<Individual>& generation) {
        for (const auto& ind : generation) {
            ScoredRule sr{ind.to_rule(), ind.support, ind.confidence};
            if (archive_index.insert(sr.rule).second)
                archive.push_back(std::move(sr));
        }
        std::vector<Objectives> obj;
        obj.reserve(archive.size());
        for (const auto& sr : archive) obj.emplace_back(sr.support, sr.confidence);
        const RankedPop ranked = rank_population(obj);
        std::vector<std::size_t> order(archive.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (ranked.rank[a] != ranked.rank[b])
                return ranked.rank[a] < ranked.rank[b];
            if (ranked.crowding[a] != ranked.crowding[b])
                return ranked.crowding[a] > ranked.crowding[b];
            return archive[a].rule < archive[b].rule;
        });
        if (order.size() > cfg.archive_capacity) order.resize(cfg.archive_capacity);
        std::vector<ScoredRule> kept;
        archive_index.clear();
        for (std::size_t i : order) {
            kept.push_back(archive[i]);
            archive_index.insert(archive[i].rule);
        }
        archive = std::move(kept);
    };

    auto archive_averages = [&]() -> Objectives {
        double s = 0.0, c = 0.0;
        for (const auto& sr : archive) {
            s += sr.support;
            c += sr.confidence;
        }
        const double n = static_cast<double>(archive.size());
        return {archive.empty() ? 0.0 : s / n, archive.empty() ? 0.0 : c / n};
    };

    EvolveResult result;
    double prev_avg_support = 0.0, prev_avg_confidence = 0.0;
    std::size_t gen = 0;
    for (gen = 1; gen <= cfg.max_generations; ++gen) {
        const RankedPop ranked = rank_population(objectives_of(pop));

        std::vector<Individual> offspring;
        while (offspring.size() < cfg.population) {
            Individual c1 = pop[tournament(ranked, rng, pop.size())];
            Individual c2 = pop[tournament(ranked, rng, pop.size())];
            if (unif(rng) < cfg.crossover_rate) {
                // one-point crossover over the gene slots [ant0, ant1, consequent]
                const int cut = std::uniform_int_distribution<int>(1, 2)(rng);
                if (cut <= 1) std::swap(c1.antecedent_slots[1], c2.antecedent_slots[1]);
                std::swap(c1.consequent, c2.consequent);
            }
            for (Individual* child : {&c1, &c2}) {
                for (auto& slot : child->antecedent_slots) {
                    if (slot && unif(rng) < cfg.mutation_rate)
                        slot = random_item(rng, item_count);
                }
                if (unif(rng) < cfg.mutation_rate)
                    child->consequent = random_item(rng, item_count);
                repair(*child, item_count, rng);
                evaluate(*child, data);
                if (offspring.size() < cfg.population)
                    offspring.push_back(*child);
            }
        }

        // elitist environmental selection over parents + offspring
        std::vector<Individual> combined = pop;
        combined.insert(combined.end(), offspring.begin(), offspring.end());
        const RankedPop cranked = rank_population(objectives_of(combined));
        std::vector<Individual> next;
        for (const auto& front : cranked.fronts) {
            if (next.size() + front.size() <= cfg.population) {
                for (std::size_t idx : front) next.push_back(combined[idx]);
            } else {
                std::vector<std::size_t> order = front;
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) {
                                     return cranked.crowding[a] > cranked.crowding[b];
                                 });
                for (std::size_t idx : order) {
                    if (next.size() == cfg.population) break;
                    next.push_back(combined[idx]);
                }
            }
            if (next.size() == cfg.population) break;
        }
        pop = std::move(next);

        merge_archive(pop);
        const auto [avg_s, avg_c] = archive_averages();
        result.log.push_back({gen, avg_s, avg_c, archive.size()});

        if (gen > 1) {
            const bool support_improved = avg_s - prev_avg_support >= cfg.improvement_threshold;
            const bool confidence_improved = avg_c - prev_avg_confidence >= cfg.improvement_threshold;
            if (!support_improved && !confidence_improved) break;
        }
        prev_avg_support = avg_s;
        prev_avg_confidence = avg_c;
    }

    for (const auto& sr : archive) result.archive.insert(sr);
    result.generations = std::min(gen, cfg.max_generations);
    return result;
}

}  // namespace armae
